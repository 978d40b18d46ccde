#pragma once

// The two minimum-angle conditions on simplicial meshes:
//
//  * minimum angle condition: every dihedral angle of every subsimplex of
//    dimension >= 2 of every cell is at least alpha0;
//  * generalized condition: every vertex d-sine of every cell is at least C.
//
// Plus the certified d-sine bound that links them and a per-cell audit of both
// directions of their equivalence.

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "minangle/angles.hpp"
#include "minangle/mesh.hpp"

namespace minangle {

struct Thresholds {
  std::optional<double> alpha0;     // radians, 0 < alpha0 < pi
  std::optional<double> dsine_min;  // 0 < C <= 1

  void validate() const {
    if (alpha0 && !(*alpha0 > 0.0 && *alpha0 < std::numbers::pi)) {
      throw InputError("alpha0 must lie in (0, pi) radians");
    }
    if (dsine_min && !(*dsine_min > 0.0 && *dsine_min <= 1.0)) {
      throw InputError("dsine_min must lie in (0, 1]");
    }
  }
};

struct Subsimplex {
  std::vector<std::size_t> vertex_ids;  // indices into the parent simplex
  Simplex simplex;
};

/// Every vertex subset of size >= min_dim + 1, ordered by size and then
/// lexicographically. The simplex itself comes last.
inline std::vector<Subsimplex> subsimplices(const Simplex& s, std::size_t min_dim = 2) {
  if (min_dim < 2) throw InputError("subsimplices: min_dim must be >= 2");
  const std::size_t n = s.vertex_count();
  std::vector<Subsimplex> out;
  for (std::size_t size = min_dim + 1; size <= n; ++size) {
    // Lexicographic walk over size-element combinations of 0..n-1.
    std::vector<std::size_t> idx(size);
    for (std::size_t a = 0; a < size; ++a) idx[a] = a;
    while (true) {
      out.push_back({idx, s.select(idx)});
      std::size_t pos = size;
      while (pos > 0 && idx[pos - 1] == n - size + pos - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t a = pos; a < size; ++a) idx[a] = idx[a - 1] + 1;
    }
  }
  return out;
}

/// sum_{m=3}^{d+1} C(d+1, m)
inline std::size_t subsimplex_count(std::size_t d) {
  std::size_t total = 0;
  std::size_t binom = 1;  // C(d+1, m), built incrementally from m = 0
  for (std::size_t m = 0; m <= d + 1; ++m) {
    if (m >= 3) total += binom;
    binom = binom * (d + 1 - m) / (m + 1);
  }
  return total;
}

namespace detail {

inline void check_enumeration_dim(const Simplex& s, const ToleranceConfig& cfg) {
  if (s.intrinsic_dim() > cfg.max_subsimplex_dim) {
    throw InputError("simplex dimension " + std::to_string(s.intrinsic_dim()) +
                     " exceeds the subsimplex enumeration limit " + std::to_string(cfg.max_subsimplex_dim));
  }
}

inline std::string subset_label(const std::vector<std::size_t>& ids) {
  std::string label = "{";
  for (std::size_t a = 0; a < ids.size(); ++a) {
    if (a) label += ",";
    label += std::to_string(ids[a]);
  }
  return label + "}";
}

// Runs f(sub, intrinsic) for every subsimplex, turning degeneracy into an error
// that names the vertex subset.
template <class F>
void for_each_projected_subsimplex(const Simplex& s, const ToleranceConfig& cfg, F&& f) {
  check_enumeration_dim(s, cfg);
  for (const auto& sub : subsimplices(s)) {
    if (is_degenerate(sub.simplex, cfg)) {
      throw DegeneracyError("subsimplex " + subset_label(sub.vertex_ids) + " is degenerate", sub.vertex_ids);
    }
    f(sub, project_intrinsic(sub.simplex, cfg));
  }
}

}  // namespace detail

struct AngleRange {
  double min = 0.0;
  double max = 0.0;
};

/// Extreme dihedral angles over all subsimplices of dimension >= 2, each measured
/// in its own affine hull. For a triangle these are its planar angles.
inline AngleRange min_dihedral_over_subsimplices(const Simplex& s, const ToleranceConfig& cfg = {}) {
  AngleRange r{std::numeric_limits<double>::infinity(), 0.0};
  detail::for_each_projected_subsimplex(s, cfg, [&](const Subsimplex&, const Simplex& intrinsic) {
    const auto set = all_dihedral_angles(intrinsic, cfg);
    r.min = std::min(r.min, set.min());
    r.max = std::max(r.max, set.max());
  });
  return r;
}

inline double min_vertex_dsine(const Simplex& s, const ToleranceConfig& cfg = {}) {
  return vertex_sines(s, cfg).min();
}

struct SimplexQuality {
  std::size_t cell_index = 0;
  double min_dihedral_all_sub = 0.0;
  double max_dihedral_all_sub = 0.0;
  double min_vertex_dsine = 0.0;
  double ball_ratio = 0.0;
  double dihedral_sum_top = 0.0;
  std::size_t subsimplex_count = 0;

  bool operator==(const SimplexQuality&) const = default;
};

inline SimplexQuality assess_simplex(const Simplex& s, std::size_t cell_index = 0, const ToleranceConfig& cfg = {}) {
  SimplexQuality q;
  q.cell_index = cell_index;
  const auto range = min_dihedral_over_subsimplices(s, cfg);
  q.min_dihedral_all_sub = range.min;
  q.max_dihedral_all_sub = range.max;
  q.min_vertex_dsine = min_vertex_dsine(s, cfg);
  q.ball_ratio = ball_ratio(s, cfg);
  q.dihedral_sum_top = dihedral_sum(s, cfg);
  q.subsimplex_count = subsimplex_count(s.intrinsic_dim());
  return q;
}

/// Per-cell result: either a quality record or the reason the cell is degenerate.
struct CellAssessment {
  std::size_t cell_index = 0;
  std::optional<SimplexQuality> quality;
  std::string degeneracy;

  bool operator==(const CellAssessment&) const = default;
};

inline std::vector<CellAssessment> assess_mesh(const Mesh& mesh, const ToleranceConfig& cfg = {}) {
  cfg.validate();
  std::vector<CellAssessment> out;
  out.reserve(mesh.cell_count());
  for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
    CellAssessment a;
    a.cell_index = c;
    try {
      a.quality = assess_simplex(mesh.cell_simplex(c), c, cfg);
    } catch (const DegeneracyError& e) {
      a.degeneracy = e.what();
    }
    out.push_back(std::move(a));
  }
  return out;
}

struct ConditionVerdict {
  std::string condition;  // "minimum_angle" or "generalized_dsine"
  bool satisfied = false;
  std::size_t worst_cell = 0;
  double worst_value = 0.0;
  double threshold_used = 0.0;
  std::vector<std::size_t> degenerate_cells;

  bool operator==(const ConditionVerdict&) const = default;
};

struct ConditionCheck {
  ConditionVerdict verdict;
  std::vector<CellAssessment> cells;
};

namespace detail {

// Degenerate cells count as value 0 (the limit of both metrics) and always violate.
template <class Metric>
ConditionVerdict evaluate_condition(const std::vector<CellAssessment>& cells, const std::string& name, double threshold,
                                    Metric metric) {
  ConditionVerdict v;
  v.condition = name;
  v.threshold_used = threshold;
  bool first = true;
  for (const auto& c : cells) {
    double value = 0.0;
    if (c.quality) {
      value = metric(*c.quality);
    } else {
      v.degenerate_cells.push_back(c.cell_index);
    }
    // Strict < keeps the lowest index on ties.
    if (first || value < v.worst_value) {
      v.worst_value = value;
      v.worst_cell = c.cell_index;
      first = false;
    }
  }
  v.satisfied = !first && v.degenerate_cells.empty() && v.worst_value >= threshold;
  return v;
}

}  // namespace detail

inline ConditionVerdict evaluate_minimum_angle_condition(const std::vector<CellAssessment>& cells, double alpha0) {
  Thresholds{alpha0, std::nullopt}.validate();
  return detail::evaluate_condition(cells, "minimum_angle", alpha0,
                                    [](const SimplexQuality& q) { return q.min_dihedral_all_sub; });
}

inline ConditionVerdict evaluate_generalized_condition(const std::vector<CellAssessment>& cells, double dsine_min) {
  Thresholds{std::nullopt, dsine_min}.validate();
  return detail::evaluate_condition(cells, "generalized_dsine", dsine_min,
                                    [](const SimplexQuality& q) { return q.min_vertex_dsine; });
}

inline ConditionCheck check_minimum_angle_condition(const Mesh& mesh, double alpha0, const ToleranceConfig& cfg = {}) {
  Thresholds{alpha0, std::nullopt}.validate();
  ConditionCheck r;
  r.cells = assess_mesh(mesh, cfg);
  r.verdict = evaluate_minimum_angle_condition(r.cells, alpha0);
  return r;
}

inline ConditionCheck check_generalized_condition(const Mesh& mesh, double dsine_min, const ToleranceConfig& cfg = {}) {
  Thresholds{std::nullopt, dsine_min}.validate();
  ConditionCheck r;
  r.cells = assess_mesh(mesh, cfg);
  r.verdict = evaluate_generalized_condition(r.cells, dsine_min);
  return r;
}

/// Lower bound on every vertex d-sine of a d-simplex whose subsimplex dihedral
/// angles all lie in [alpha0, gamma0]: s^(d(d-1)/2), s = min(sin alpha0, sin gamma0).
/// Each level d' of the product recursion contributes d'-1 dihedral factors and the
/// planar base contributes one.
inline double certified_dsine_bound(double alpha0, double gamma0, std::size_t d) {
  if (d < 2) throw InputError("certified_dsine_bound: d must be >= 2");
  if (!(alpha0 > 0.0) || !(alpha0 <= gamma0) || !(gamma0 < std::numbers::pi)) {
    throw InputError("certified_dsine_bound: need 0 < alpha0 <= gamma0 < pi");
  }
  const double s = std::min(std::sin(alpha0), std::sin(gamma0));
  return std::pow(s, static_cast<double>(d * (d - 1) / 2));
}

inline constexpr double kAuditTolerance = 1e-9;

struct CellAudit {
  std::size_t cell_index = 0;
  bool degenerate = false;
  std::string note;
  /// min over subsimplices S' of (min sin(beta) in S' - min vertex d-sine of S')
  double forward_margin = 0.0;
  /// min vertex d-sine - certified bound
  double backward_margin = 0.0;
  double certified_bound = 0.0;
  double min_dsine = 0.0;
  double min_dihedral = 0.0;
  double max_dihedral = 0.0;

  bool operator==(const CellAudit&) const = default;

  bool passed() const { return !degenerate && forward_margin >= -kAuditTolerance && backward_margin >= -kAuditTolerance; }
};

struct AuditReport {
  std::vector<CellAudit> cells;

  bool all_margins_ok() const {
    for (const auto& c : cells) {
      if (!c.degenerate && !c.passed()) return false;
    }
    return true;
  }

  bool any_degenerate() const {
    for (const auto& c : cells) {
      if (c.degenerate) return true;
    }
    return false;
  }
};

inline CellAudit audit_simplex(const Simplex& s, std::size_t cell_index = 0, const ToleranceConfig& cfg = {}) {
  CellAudit a;
  a.cell_index = cell_index;
  try {
    double forward = std::numeric_limits<double>::infinity();
    AngleRange range{std::numeric_limits<double>::infinity(), 0.0};
    detail::for_each_projected_subsimplex(s, cfg, [&](const Subsimplex&, const Simplex& intrinsic) {
      const auto set = all_dihedral_angles(intrinsic, cfg);
      const double sub_min_sine = min_vertex_dsine(intrinsic, cfg);
      for (const auto& e : set.angles) forward = std::min(forward, std::sin(e.angle) - sub_min_sine);
      range.min = std::min(range.min, set.min());
      range.max = std::max(range.max, set.max());
    });
    a.forward_margin = forward;
    a.min_dihedral = range.min;
    a.max_dihedral = range.max;
    if (!(range.min > 0.0) || !(range.max < std::numbers::pi)) {
      throw DegeneracyError("dihedral angle range collapsed to 0 or pi");
    }
    a.min_dsine = min_vertex_dsine(s, cfg);
    a.certified_bound = certified_dsine_bound(range.min, range.max, s.intrinsic_dim());
    a.backward_margin = a.min_dsine - a.certified_bound;
  } catch (const DegeneracyError& e) {
    a = CellAudit{};
    a.cell_index = cell_index;
    a.degenerate = true;
    a.note = e.what();
  }
  return a;
}

inline AuditReport equivalence_audit(const Mesh& mesh, const ToleranceConfig& cfg = {}) {
  cfg.validate();
  AuditReport r;
  r.cells.reserve(mesh.cell_count());
  for (std::size_t c = 0; c < mesh.cell_count(); ++c) r.cells.push_back(audit_simplex(mesh.cell_simplex(c), c, cfg));
  return r;
}

}  // namespace minangle
