#pragma once

// Sweeps over a family of meshes (coarse to fine): per-mesh reports, family-level
// minima, a trend table and family verdicts.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "minangle/report.hpp"

namespace minangle {

struct FamilyMember {
  std::string path;
  QualityReport report;
};

struct FamilyVerdict {
  ConditionVerdict verdict;  // worst_cell is relative to worst_mesh
  std::size_t worst_mesh = 0;
  std::vector<std::size_t> degenerate_meshes;
};

struct FamilyReport {
  std::size_t ambient_dimension = 0;
  std::vector<FamilyMember> members;
  Aggregates family_aggregates;
  std::vector<FamilyVerdict> verdicts;

  bool any_degenerate() const {
    for (const auto& v : verdicts) {
      if (!v.degenerate_meshes.empty()) return true;
    }
    for (const auto& m : members) {
      for (const auto& c : m.report.cells) {
        if (!c.quality) return true;
      }
    }
    return false;
  }
};

namespace detail {

inline FamilyVerdict fold_verdicts(const std::vector<FamilyMember>& members, std::size_t slot) {
  FamilyVerdict fv;
  fv.verdict = members.front().report.verdicts.at(slot);
  fv.verdict.satisfied = true;
  fv.verdict.degenerate_cells.clear();
  bool first = true;
  for (std::size_t m = 0; m < members.size(); ++m) {
    const auto& v = members[m].report.verdicts.at(slot);
    if (!v.satisfied) fv.verdict.satisfied = false;
    if (!v.degenerate_cells.empty()) fv.degenerate_meshes.push_back(m);
    if (first || v.worst_value < fv.verdict.worst_value) {
      fv.verdict.worst_value = v.worst_value;
      fv.verdict.worst_cell = v.worst_cell;
      fv.worst_mesh = m;
      first = false;
    }
  }
  return fv;
}

}  // namespace detail

/// Meshes must share one ambient dimension. Verdicts are produced for every threshold supplied.
inline FamilyReport assess_family(const std::vector<std::pair<std::string, Mesh>>& meshes, const Thresholds& thresholds,
                                  const ToleranceConfig& cfg = {}) {
  thresholds.validate();
  if (meshes.empty()) throw InputError("family has no meshes");
  FamilyReport fr;
  fr.ambient_dimension = meshes.front().second.ambient_dim;
  for (const auto& [path, mesh] : meshes) {
    if (mesh.ambient_dim != fr.ambient_dimension) {
      throw InputError(path + ": ambient dimension " + std::to_string(mesh.ambient_dim) + " differs from the family's " +
                       std::to_string(fr.ambient_dimension));
    }
  }
  std::vector<CellAssessment> all_cells;
  for (const auto& [path, mesh] : meshes) {
    auto cells = assess_mesh(mesh, cfg);
    std::vector<ConditionVerdict> verdicts;
    if (thresholds.alpha0) verdicts.push_back(evaluate_minimum_angle_condition(cells, *thresholds.alpha0));
    if (thresholds.dsine_min) verdicts.push_back(evaluate_generalized_condition(cells, *thresholds.dsine_min));
    all_cells.insert(all_cells.end(), cells.begin(), cells.end());
    fr.members.push_back({path, build_report(mesh, std::move(cells), std::move(verdicts))});
  }
  fr.family_aggregates = compute_aggregates(all_cells);
  const std::size_t slots = fr.members.front().report.verdicts.size();
  for (std::size_t s = 0; s < slots; ++s) fr.verdicts.push_back(detail::fold_verdicts(fr.members, s));
  return fr;
}

inline nlohmann::ordered_json family_report_to_json(const FamilyReport& fr, const ReportOptions& opt = {}) {
  using detail::ojson;
  ojson j;
  j["ambient_dimension"] = fr.ambient_dimension;
  j["mesh_count"] = fr.members.size();
  j["meshes"] = ojson::array();
  for (std::size_t m = 0; m < fr.members.size(); ++m) {
    const auto& r = fr.members[m].report;
    ojson mj;
    mj["index"] = m;
    mj["path"] = fr.members[m].path;
    mj["cell_count"] = r.cell_count;
    mj["aggregates"] = detail::aggregates_to_json(r.aggregates, opt);
    mj["verdicts"] = ojson::array();
    for (const auto& v : r.verdicts) mj["verdicts"].push_back(detail::verdict_to_json(v, opt));
    j["meshes"].push_back(std::move(mj));
  }
  j["family_aggregates"] = detail::aggregates_to_json(fr.family_aggregates, opt);
  j["trend"] = ojson::array();
  for (std::size_t m = 0; m < fr.members.size(); ++m) {
    const auto& a = fr.members[m].report.aggregates;
    ojson t;
    t["mesh_index"] = m;
    t["min_dihedral_rad"] = detail::optional_number(a.min_dihedral_rad);
    t["min_dsine"] = detail::optional_number(a.min_dsine);
    j["trend"].push_back(std::move(t));
  }
  j["verdicts"] = ojson::array();
  for (const auto& fv : fr.verdicts) {
    ojson vj = detail::verdict_to_json(fv.verdict, opt);
    vj.erase("degenerate_cells");
    vj["worst_mesh"] = fv.worst_mesh;
    vj["degenerate_meshes"] = fv.degenerate_meshes;
    j["verdicts"].push_back(std::move(vj));
  }
  return j;
}

}  // namespace minangle
