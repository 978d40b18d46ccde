#pragma once

// Dihedral angles, Eriksson d-sines and the inscribed-ball metric.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "minangle/geometry.hpp"

namespace minangle {

struct FacetPairAngle {
  std::size_t i = 0;  // i < j
  std::size_t j = 0;
  double angle = 0.0;  // radians
};

/// All dihedral angles of one simplex, one entry per unordered facet pair, lexicographic.
struct DihedralAngleSet {
  std::size_t simplex_dim = 0;
  std::vector<FacetPairAngle> angles;
  std::vector<Point> normals;

  double angle(std::size_t a, std::size_t b) const {
    if (a == b) throw InputError("dihedral angle needs two distinct facets");
    if (a > b) std::swap(a, b);
    for (const auto& e : angles) {
      if (e.i == a && e.j == b) return e.angle;
    }
    throw InputError("facet pair (" + std::to_string(a) + ", " + std::to_string(b) + ") out of range");
  }

  double min() const;
  double max() const;
  double sum() const;
};

inline double DihedralAngleSet::min() const {
  double m = std::numbers::pi;
  for (const auto& e : angles) m = std::min(m, e.angle);
  return m;
}

inline double DihedralAngleSet::max() const {
  double m = 0.0;
  for (const auto& e : angles) m = std::max(m, e.angle);
  return m;
}

inline double DihedralAngleSet::sum() const {
  double s = 0.0;
  for (const auto& e : angles) s += e.angle;
  return s;
}

struct VertexSineSet {
  std::vector<double> sines;

  double min() const {
    double m = sines.empty() ? 0.0 : sines.front();
    for (double s : sines) m = std::min(m, s);
    return m;
  }
};

struct ProductDecomposition {
  std::size_t vertex_index = 0;
  double sub_sine = 0.0;                // sin_{d-1} at A_i on the facet omitting A_d
  std::vector<double> dihedral_sines;   // sin(beta_j), j = 0..d-1, j != i, in increasing j
  double product = 0.0;                 // sub_sine * prod(dihedral_sines)
  double d_sine = 0.0;                  // left-hand side, computed directly
  double relative_residual = 0.0;       // |d_sine - product| / d_sine
};

namespace detail {

// Angle between facets from their unit normals, cos(beta) = -n_a . n_b.
// atan2 keeps full relative precision near 0 and pi, where arccos does not.
inline double angle_from_normals(const Point& na, const Point& nb) {
  const double c = dot(na, nb);
  Point perp = nb;
  axpy_neg(c, na, perp);
  const double s = norm(perp);
  const double cosine = std::clamp(-c, -1.0, 1.0);
  return std::atan2(s, cosine);
}

inline void check_pair(std::size_t k, std::size_t i, std::size_t j) {
  if (k < 2) throw InputError("dihedral angles need a simplex of dimension >= 2");
  if (i > k || j > k) throw InputError("facet index out of range 0.." + std::to_string(k));
  if (i == j) throw InputError("dihedral angle needs two distinct facets");
}

}  // namespace detail

inline double dihedral_angle(const Simplex& s, std::size_t i, std::size_t j, const ToleranceConfig& cfg = {}) {
  detail::check_pair(s.intrinsic_dim(), i, j);
  if (i > j) std::swap(i, j);
  return detail::angle_from_normals(outward_unit_normal(s, i, cfg), outward_unit_normal(s, j, cfg));
}

inline DihedralAngleSet all_dihedral_angles(const Simplex& s, const ToleranceConfig& cfg = {}) {
  const std::size_t k = s.intrinsic_dim();
  if (k < 2) throw InputError("dihedral angles need a simplex of dimension >= 2");
  DihedralAngleSet set;
  set.simplex_dim = k;
  set.normals.reserve(k + 1);
  for (std::size_t i = 0; i <= k; ++i) set.normals.push_back(outward_unit_normal(s, i, cfg));
  set.angles.reserve(k * (k + 1) / 2);
  for (std::size_t i = 0; i <= k; ++i) {
    for (std::size_t j = i + 1; j <= k; ++j) {
      set.angles.push_back({i, j, detail::angle_from_normals(set.normals[i], set.normals[j])});
    }
  }
  return set;
}

/// Eriksson d-sines at every vertex, using the intrinsic dimension k of the simplex.
inline VertexSineSet vertex_sines(const Simplex& s, const ToleranceConfig& cfg = {}) {
  const std::size_t k = s.intrinsic_dim();
  if (k < 2) throw InputError("d-sine needs a simplex of dimension >= 2");
  detail::require_nondegenerate(s, cfg, "d_sine");

  // Work on a copy scaled to unit diameter: the ratio is homogeneous of degree
  // k(k-1) in both numerator and denominator, and this keeps the powers in range.
  const double scale = s.max_edge_length();
  std::vector<Point> unit;
  unit.reserve(k + 1);
  for (const auto& v : s.vertices()) {
    Point p = detail::sub(v, s.vertex(0));
    for (auto& x : p) x /= scale;
    unit.push_back(std::move(p));
  }
  const Simplex u(std::move(unit));

  const double volume = simplex_measure(u);
  std::vector<double> facet_measures(k + 1);
  for (std::size_t j = 0; j <= k; ++j) {
    facet_measures[j] = simplex_measure(facet(u, j).simplex);
    if (!(facet_measures[j] > 0.0)) {
      throw DegeneracyError("d_sine: facet " + std::to_string(j) + " has zero measure");
    }
  }

  const double kd = static_cast<double>(k);
  VertexSineSet out;
  out.sines.resize(k + 1);
  if (k <= 12) {
    const double numerator = std::pow(kd, kd - 1.0) * std::pow(volume, kd - 1.0) / detail::factorial(k - 1);
    for (std::size_t i = 0; i <= k; ++i) {
      double denom = 1.0;
      for (std::size_t j = 0; j <= k; ++j) {
        if (j != i) denom *= facet_measures[j];
      }
      out.sines[i] = numerator / denom;
    }
  } else {
    const double log_numerator = (kd - 1.0) * std::log(kd) + (kd - 1.0) * std::log(volume) - std::lgamma(kd);
    for (std::size_t i = 0; i <= k; ++i) {
      double log_denom = 0.0;
      for (std::size_t j = 0; j <= k; ++j) {
        if (j != i) log_denom += std::log(facet_measures[j]);
      }
      out.sines[i] = std::exp(log_numerator - log_denom);
    }
  }
  return out;
}

inline double d_sine(const Simplex& s, std::size_t i, const ToleranceConfig& cfg = {}) {
  if (i > s.intrinsic_dim()) throw InputError("vertex index " + std::to_string(i) + " out of range");
  return vertex_sines(s, cfg).sines[i];
}

/// Splits sin_d at A_i into the (d-1)-sine on the facet omitting the last vertex
/// times the sines of the dihedral angles that facet makes with its neighbours
/// through A_i. Requires i < d; reorder the vertices first for i = d.
inline ProductDecomposition product_decomposition(const Simplex& s, std::size_t i, const ToleranceConfig& cfg = {}) {
  const std::size_t k = s.intrinsic_dim();
  if (k < 3) throw InputError("product decomposition needs a simplex of dimension >= 3");
  if (i >= k) {
    throw InputError("product decomposition needs vertex index < " + std::to_string(k) +
                     " (the vertex must lie on the facet omitting the last vertex)");
  }
  ProductDecomposition pd;
  pd.vertex_index = i;
  pd.d_sine = d_sine(s, i, cfg);

  const Simplex base = project_intrinsic(facet(s, k).simplex, cfg);
  pd.sub_sine = d_sine(base, i, cfg);

  const auto angles = all_dihedral_angles(s, cfg);
  pd.product = pd.sub_sine;
  for (std::size_t j = 0; j < k; ++j) {
    if (j == i) continue;
    const double sb = std::sin(angles.angle(j, k));
    pd.dihedral_sines.push_back(sb);
    pd.product *= sb;
  }
  pd.relative_residual = std::abs(pd.d_sine - pd.product) / pd.d_sine;
  return pd;
}

inline double dihedral_sum(const Simplex& s, const ToleranceConfig& cfg = {}) {
  return all_dihedral_angles(s, cfg).sum();
}

/// r = k * meas_k(S) / sum of facet measures.
inline double inradius(const Simplex& s, const ToleranceConfig& cfg = {}) {
  const std::size_t k = s.intrinsic_dim();
  if (k < 1) throw InputError("inradius needs a simplex of dimension >= 1");
  detail::require_nondegenerate(s, cfg, "inradius");
  double facet_total = 0.0;
  for (std::size_t j = 0; j <= k; ++j) facet_total += simplex_measure(facet(s, j).simplex);
  return static_cast<double>(k) * simplex_measure(s) / facet_total;
}

inline double ball_ratio(const Simplex& s, const ToleranceConfig& cfg = {}) {
  return inradius(s, cfg) / diameter(s);
}

inline double to_degrees(double radians) { return radians * 180.0 / std::numbers::pi; }
inline double to_radians(double degrees) { return degrees * std::numbers::pi / 180.0; }

}  // namespace minangle
