#pragma once

// Quality reports: per-cell metrics, mesh aggregates, condition verdicts and an
// optional equivalence audit, serialized as JSON with a fixed key order so that
// identical inputs give byte-identical output.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "minangle/regularity.hpp"

namespace minangle {

struct Aggregates {
  std::optional<double> min_dihedral_rad;
  std::optional<double> max_dihedral_rad;
  std::optional<double> min_dsine;
  std::optional<double> min_ball_ratio;

  bool operator==(const Aggregates&) const = default;
};

struct QualityReport {
  std::size_t ambient_dimension = 0;
  std::size_t cell_count = 0;
  Aggregates aggregates;
  std::vector<CellAssessment> cells;
  std::vector<ConditionVerdict> verdicts;
  std::optional<AuditReport> audit;

  bool operator==(const QualityReport& o) const {
    const bool audits_equal = audit.has_value() == o.audit.has_value() && (!audit || audit->cells == o.audit->cells);
    return ambient_dimension == o.ambient_dimension && cell_count == o.cell_count && aggregates == o.aggregates &&
           cells == o.cells && verdicts == o.verdicts && audits_equal;
  }
};

struct ReportOptions {
  /// Adds *_deg companions next to every radian field. Never changes a verdict.
  bool degree_annotations = false;
};

/// Extrema over the non-degenerate cells; empty when every cell is degenerate.
inline Aggregates compute_aggregates(const std::vector<CellAssessment>& cells) {
  Aggregates a;
  auto fold_min = [](std::optional<double>& acc, double v) { acc = acc ? std::min(*acc, v) : v; };
  auto fold_max = [](std::optional<double>& acc, double v) { acc = acc ? std::max(*acc, v) : v; };
  for (const auto& c : cells) {
    if (!c.quality) continue;
    fold_min(a.min_dihedral_rad, c.quality->min_dihedral_all_sub);
    fold_max(a.max_dihedral_rad, c.quality->max_dihedral_all_sub);
    fold_min(a.min_dsine, c.quality->min_vertex_dsine);
    fold_min(a.min_ball_ratio, c.quality->ball_ratio);
  }
  return a;
}

inline QualityReport build_report(const Mesh& mesh, std::vector<CellAssessment> cells,
                                  std::vector<ConditionVerdict> verdicts = {},
                                  std::optional<AuditReport> audit = std::nullopt) {
  QualityReport r;
  r.ambient_dimension = mesh.ambient_dim;
  r.cell_count = mesh.cell_count();
  r.aggregates = compute_aggregates(cells);
  r.cells = std::move(cells);
  r.verdicts = std::move(verdicts);
  r.audit = std::move(audit);
  return r;
}

namespace detail {

using ojson = nlohmann::ordered_json;

inline ojson optional_number(const std::optional<double>& v) { return v ? ojson(*v) : ojson(nullptr); }

inline std::optional<double> read_optional(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<double>();
}

inline void put_degrees(ojson& j, const char* key, const std::optional<double>& rad) {
  j[key] = rad ? ojson(to_degrees(*rad)) : ojson(nullptr);
}

inline ojson aggregates_to_json(const Aggregates& a, const ReportOptions& opt) {
  ojson j;
  j["min_dihedral_rad"] = optional_number(a.min_dihedral_rad);
  j["max_dihedral_rad"] = optional_number(a.max_dihedral_rad);
  j["min_dsine"] = optional_number(a.min_dsine);
  j["min_ball_ratio"] = optional_number(a.min_ball_ratio);
  if (opt.degree_annotations) {
    put_degrees(j, "min_dihedral_deg", a.min_dihedral_rad);
    put_degrees(j, "max_dihedral_deg", a.max_dihedral_rad);
  }
  return j;
}

inline Aggregates aggregates_from_json(const nlohmann::json& j) {
  Aggregates a;
  a.min_dihedral_rad = read_optional(j, "min_dihedral_rad");
  a.max_dihedral_rad = read_optional(j, "max_dihedral_rad");
  a.min_dsine = read_optional(j, "min_dsine");
  a.min_ball_ratio = read_optional(j, "min_ball_ratio");
  return a;
}

inline ojson cell_to_json(const CellAssessment& c, const ReportOptions& opt) {
  ojson j;
  j["index"] = c.cell_index;
  if (c.quality) {
    const auto& q = *c.quality;
    j["min_dihedral_rad"] = q.min_dihedral_all_sub;
    j["max_dihedral_rad"] = q.max_dihedral_all_sub;
    j["min_dsine"] = q.min_vertex_dsine;
    j["ball_ratio"] = q.ball_ratio;
    j["dihedral_sum_rad"] = q.dihedral_sum_top;
    j["subsimplex_count"] = q.subsimplex_count;
    if (opt.degree_annotations) {
      j["min_dihedral_deg"] = to_degrees(q.min_dihedral_all_sub);
      j["max_dihedral_deg"] = to_degrees(q.max_dihedral_all_sub);
      j["dihedral_sum_deg"] = to_degrees(q.dihedral_sum_top);
    }
  } else {
    for (const char* key : {"min_dihedral_rad", "max_dihedral_rad", "min_dsine", "ball_ratio", "dihedral_sum_rad"}) {
      j[key] = nullptr;
    }
    j["degeneracy"] = c.degeneracy;
  }
  return j;
}

inline CellAssessment cell_from_json(const nlohmann::json& j) {
  CellAssessment c;
  c.cell_index = j.at("index").get<std::size_t>();
  if (j.contains("degeneracy")) {
    c.degeneracy = j["degeneracy"].get<std::string>();
    return c;
  }
  SimplexQuality q;
  q.cell_index = c.cell_index;
  q.min_dihedral_all_sub = j.at("min_dihedral_rad").get<double>();
  q.max_dihedral_all_sub = j.at("max_dihedral_rad").get<double>();
  q.min_vertex_dsine = j.at("min_dsine").get<double>();
  q.ball_ratio = j.at("ball_ratio").get<double>();
  q.dihedral_sum_top = j.at("dihedral_sum_rad").get<double>();
  q.subsimplex_count = j.at("subsimplex_count").get<std::size_t>();
  c.quality = q;
  return c;
}

inline ojson verdict_to_json(const ConditionVerdict& v, const ReportOptions& opt) {
  ojson j;
  j["condition"] = v.condition;
  j["threshold"] = v.threshold_used;
  j["satisfied"] = v.satisfied;
  j["worst_cell"] = v.worst_cell;
  j["worst_value"] = v.worst_value;
  j["degenerate_cells"] = v.degenerate_cells;
  if (opt.degree_annotations && v.condition == "minimum_angle") {
    j["threshold_deg"] = to_degrees(v.threshold_used);
    j["worst_value_deg"] = to_degrees(v.worst_value);
  }
  return j;
}

inline ConditionVerdict verdict_from_json(const nlohmann::json& j) {
  ConditionVerdict v;
  v.condition = j.at("condition").get<std::string>();
  v.threshold_used = j.at("threshold").get<double>();
  v.satisfied = j.at("satisfied").get<bool>();
  v.worst_cell = j.at("worst_cell").get<std::size_t>();
  v.worst_value = j.at("worst_value").get<double>();
  if (j.contains("degenerate_cells")) v.degenerate_cells = j["degenerate_cells"].get<std::vector<std::size_t>>();
  return v;
}

inline ojson audit_to_json(const AuditReport& a) {
  ojson j;
  j["passed"] = a.all_margins_ok() && !a.any_degenerate();
  j["tolerance"] = kAuditTolerance;
  j["cells"] = ojson::array();
  for (const auto& c : a.cells) {
    ojson cj;
    cj["index"] = c.cell_index;
    if (c.degenerate) {
      cj["degeneracy"] = c.note;
    } else {
      cj["forward_margin"] = c.forward_margin;
      cj["backward_margin"] = c.backward_margin;
      cj["certified_bound"] = c.certified_bound;
      cj["min_dsine"] = c.min_dsine;
      cj["min_dihedral_rad"] = c.min_dihedral;
      cj["max_dihedral_rad"] = c.max_dihedral;
      cj["passed"] = c.passed();
    }
    j["cells"].push_back(std::move(cj));
  }
  return j;
}

inline AuditReport audit_from_json(const nlohmann::json& j) {
  AuditReport a;
  for (const auto& cj : j.at("cells")) {
    CellAudit c;
    c.cell_index = cj.at("index").get<std::size_t>();
    if (cj.contains("degeneracy")) {
      c.degenerate = true;
      c.note = cj["degeneracy"].get<std::string>();
    } else {
      c.forward_margin = cj.at("forward_margin").get<double>();
      c.backward_margin = cj.at("backward_margin").get<double>();
      c.certified_bound = cj.at("certified_bound").get<double>();
      c.min_dsine = cj.at("min_dsine").get<double>();
      c.min_dihedral = cj.at("min_dihedral_rad").get<double>();
      c.max_dihedral = cj.at("max_dihedral_rad").get<double>();
    }
    a.cells.push_back(std::move(c));
  }
  return a;
}

}  // namespace detail

inline nlohmann::ordered_json report_to_json(const QualityReport& r, const ReportOptions& opt = {}) {
  nlohmann::ordered_json j;
  j["ambient_dimension"] = r.ambient_dimension;
  j["cell_count"] = r.cell_count;
  j["aggregates"] = detail::aggregates_to_json(r.aggregates, opt);
  j["cells"] = nlohmann::ordered_json::array();
  for (const auto& c : r.cells) j["cells"].push_back(detail::cell_to_json(c, opt));
  j["verdicts"] = nlohmann::ordered_json::array();
  for (const auto& v : r.verdicts) j["verdicts"].push_back(detail::verdict_to_json(v, opt));
  if (r.audit) j["audit"] = detail::audit_to_json(*r.audit);
  return j;
}

inline QualityReport report_from_json(const nlohmann::json& j) {
  QualityReport r;
  try {
    r.ambient_dimension = j.at("ambient_dimension").get<std::size_t>();
    r.cell_count = j.at("cell_count").get<std::size_t>();
    r.aggregates = detail::aggregates_from_json(j.at("aggregates"));
    for (const auto& c : j.at("cells")) r.cells.push_back(detail::cell_from_json(c));
    for (const auto& v : j.at("verdicts")) r.verdicts.push_back(detail::verdict_from_json(v));
    if (j.contains("audit")) r.audit = detail::audit_from_json(j["audit"]);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed report: ") + e.what());
  }
  return r;
}

inline void write_report(const QualityReport& r, std::ostream& out, const ReportOptions& opt = {}) {
  out << report_to_json(r, opt).dump(2) << '\n';
  if (!out) throw std::runtime_error("failed to write report");
}

inline std::string write_report(const QualityReport& r, const ReportOptions& opt = {}) {
  std::ostringstream out;
  write_report(r, out, opt);
  return out.str();
}

inline QualityReport read_report(std::istream& in) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("malformed report: ") + e.what());
  }
  return report_from_json(j);
}

inline QualityReport read_report(const std::string& text) {
  std::istringstream in(text);
  return read_report(in);
}

}  // namespace minangle
