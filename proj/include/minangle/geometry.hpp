#pragma once

// Geometric kernel for k-simplices embedded in R^d.
//
// Everything here works with a runtime ambient dimension. Measures come from a
// column-pivoted, re-orthogonalized Gram-Schmidt factorization of the edge
// vectors A_i - A_0: the product of the residual norms is sqrt(det G) for the
// Gram matrix G of those edges, and the orthonormal directions double as the
// intrinsic frame of the simplex's affine hull.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "minangle/errors.hpp"

namespace minangle {

using Point = std::vector<double>;

enum class AngleUnit { radians, degrees };

struct ToleranceConfig {
  /// Relative threshold for is_degenerate: sqrt(det G) <= tol * (max edge)^k.
  double degeneracy_rel_tol = 1e-12;
  /// Cosines are always clamped to [-1, 1] before an angle is taken.
  static constexpr bool cosine_clamp = true;
  /// Reporting only. Every computation is in radians.
  AngleUnit angle_unit = AngleUnit::radians;
  /// Largest cell dimension for which subsimplices are enumerated (2^(d+1) growth).
  std::size_t max_subsimplex_dim = 12;

  void validate() const {
    if (!(degeneracy_rel_tol > 0.0) || !std::isfinite(degeneracy_rel_tol)) {
      throw InputError("degeneracy_rel_tol must be a positive finite number");
    }
  }
};

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline Point sub(std::span<const double> a, std::span<const double> b) {
  Point r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

/// y -= alpha * x
inline void axpy_neg(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] -= alpha * x[i];
}

inline double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = a[i] - b[i];
    s += t * t;
  }
  return std::sqrt(s);
}

/// Removes the components of v along each (orthonormal) basis vector, twice.
inline void orthogonalize_against(const std::vector<Point>& basis, Point& v) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& q : basis) axpy_neg(dot(q, v), q, v);
  }
}

struct PivotedFactorization {
  std::vector<Point> basis;          // orthonormal directions, in pivot order
  std::vector<double> residuals;     // residual norm at each pivot step
  std::vector<std::size_t> pivots;   // which input vector was taken at each step
  double volume_factor = 0.0;        // product of residuals == sqrt(det Gram)
  bool full_rank = false;
};

// Column-pivoted modified Gram-Schmidt with a second orthogonalization pass on the
// pivot. Stops at the first zero residual; the volume factor is then exactly 0.
inline PivotedFactorization factorize(std::vector<Point> vectors) {
  PivotedFactorization f;
  const std::size_t n = vectors.size();
  std::vector<bool> used(n, false);
  f.volume_factor = 1.0;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t best = n;
    double best_norm = -1.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j]) continue;
      const double nj = norm(vectors[j]);
      if (nj > best_norm) {
        best_norm = nj;
        best = j;
      }
    }
    used[best] = true;
    Point q = vectors[best];
    orthogonalize_against(f.basis, q);
    const double r = norm(q);
    f.pivots.push_back(best);
    f.residuals.push_back(r);
    if (!(r > 0.0)) {
      f.volume_factor = 0.0;
      return f;
    }
    f.volume_factor *= r;
    for (auto& x : q) x /= r;
    for (std::size_t j = 0; j < n; ++j) {
      if (!used[j]) axpy_neg(dot(q, vectors[j]), q, vectors[j]);
    }
    f.basis.push_back(std::move(q));
  }
  f.full_rank = true;
  return f;
}

inline double factorial(std::size_t k) {
  double f = 1.0;
  for (std::size_t i = 2; i <= k; ++i) f *= static_cast<double>(i);
  return f;
}

}  // namespace detail

/// Ordered vertices of a k-simplex in R^d (k = vertex count - 1, k <= d).
class Simplex {
 public:
  Simplex() = default;

  explicit Simplex(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.empty()) throw InputError("simplex needs at least one vertex");
    const std::size_t d = vertices_.front().size();
    if (d == 0) throw InputError("vertices must have at least one coordinate");
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      if (vertices_[i].size() != d) {
        throw InputError("vertex " + std::to_string(i) + " has " + std::to_string(vertices_[i].size()) +
                         " coordinates, expected " + std::to_string(d));
      }
      for (double c : vertices_[i]) {
        if (!std::isfinite(c)) throw InputError("vertex " + std::to_string(i) + " has a non-finite coordinate");
      }
    }
    if (vertices_.size() > d + 1) {
      throw InputError(std::to_string(vertices_.size()) + " vertices cannot span a simplex in R^" + std::to_string(d));
    }
  }

  std::size_t ambient_dim() const noexcept { return vertices_.empty() ? 0 : vertices_.front().size(); }
  std::size_t intrinsic_dim() const noexcept { return vertices_.empty() ? 0 : vertices_.size() - 1; }
  std::size_t vertex_count() const noexcept { return vertices_.size(); }

  const Point& vertex(std::size_t i) const { return vertices_.at(i); }
  const std::vector<Point>& vertices() const noexcept { return vertices_; }

  /// Edge vectors A_i - A_0 for i = 1..k.
  std::vector<Point> edge_vectors() const {
    std::vector<Point> edges;
    edges.reserve(intrinsic_dim());
    for (std::size_t i = 1; i < vertices_.size(); ++i) edges.push_back(detail::sub(vertices_[i], vertices_[0]));
    return edges;
  }

  double max_edge_length() const {
    double m = 0.0;
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      for (std::size_t j = i + 1; j < vertices_.size(); ++j) m = std::max(m, detail::distance(vertices_[i], vertices_[j]));
    }
    return m;
  }

  /// Sub-simplex on the given vertex indices, in the given order.
  Simplex select(std::span<const std::size_t> indices) const {
    std::vector<Point> v;
    v.reserve(indices.size());
    for (std::size_t i : indices) {
      if (i >= vertices_.size()) throw InputError("vertex index " + std::to_string(i) + " out of range");
      v.push_back(vertices_[i]);
    }
    return Simplex(std::move(v));
  }

  bool operator==(const Simplex&) const = default;

 private:
  std::vector<Point> vertices_;
};

struct Facet {
  Simplex simplex;
  std::size_t omitted_vertex_index = 0;
};

/// sqrt(det G) for the Gram matrix of the edge vectors (without the 1/k! factor).
inline double gram_volume_factor(const Simplex& s) {
  if (s.intrinsic_dim() == 0) return 1.0;
  return detail::factorize(s.edge_vectors()).volume_factor;
}

/// k-dimensional measure sqrt(det G)/k!. Zero for degenerate input, 1 for a single point.
inline double simplex_measure(const Simplex& s) {
  return gram_volume_factor(s) / detail::factorial(s.intrinsic_dim());
}

inline Facet facet(const Simplex& s, std::size_t i) {
  const std::size_t k = s.intrinsic_dim();
  if (k < 1) throw InputError("a 0-simplex has no facets");
  if (i > k) throw InputError("facet index " + std::to_string(i) + " out of range 0.." + std::to_string(k));
  std::vector<Point> v;
  v.reserve(k);
  for (std::size_t j = 0; j <= k; ++j) {
    if (j != i) v.push_back(s.vertex(j));
  }
  return Facet{Simplex(std::move(v)), i};
}

inline bool is_degenerate(const Simplex& s, const ToleranceConfig& cfg = {}) {
  const std::size_t k = s.intrinsic_dim();
  if (k == 0) return false;
  const double scale = std::pow(s.max_edge_length(), static_cast<double>(k));
  return gram_volume_factor(s) <= cfg.degeneracy_rel_tol * scale;
}

namespace detail {

inline void require_nondegenerate(const Simplex& s, const ToleranceConfig& cfg, const char* what) {
  if (is_degenerate(s, cfg)) {
    std::vector<std::size_t> all(s.vertex_count());
    std::iota(all.begin(), all.end(), std::size_t{0});
    throw DegeneracyError(std::string(what) + ": simplex is degenerate", std::move(all));
  }
}

}  // namespace detail

/// Orthonormal basis (in R^d) of the direction space of the affine hull.
inline std::vector<Point> orthonormal_frame(const Simplex& s, const ToleranceConfig& cfg = {}) {
  detail::require_nondegenerate(s, cfg, "orthonormal_frame");
  auto f = detail::factorize(s.edge_vectors());
  if (!f.full_rank) throw DegeneracyError("orthonormal_frame: edge vectors are linearly dependent");
  return std::move(f.basis);
}

/// The same simplex in R^k coordinates of its affine hull; A_0 maps to the origin.
inline Simplex project_intrinsic(const Simplex& s, const ToleranceConfig& cfg = {}) {
  const auto frame = orthonormal_frame(s, cfg);
  const std::size_t k = s.intrinsic_dim();
  std::vector<Point> projected;
  projected.reserve(k + 1);
  for (const auto& v : s.vertices()) {
    const Point rel = detail::sub(v, s.vertex(0));
    Point c(k);
    for (std::size_t a = 0; a < k; ++a) c[a] = detail::dot(frame[a], rel);
    projected.push_back(std::move(c));
  }
  return Simplex(std::move(projected));
}

// The normal is the component of (A_i - P) orthogonal to the facet directions,
// negated, for any vertex P of F_i. It lies in the hull's direction space, so the
// result is valid for embedded (k < d) simplices as well as full-dimensional ones.
inline Point outward_unit_normal(const Simplex& s, std::size_t i, const ToleranceConfig& cfg = {}) {
  const std::size_t k = s.intrinsic_dim();
  if (k < 1) throw InputError("outward_unit_normal needs a simplex of dimension >= 1");
  if (i > k) throw InputError("facet index " + std::to_string(i) + " out of range 0.." + std::to_string(k));
  detail::require_nondegenerate(s, cfg, "outward_unit_normal");

  const Facet f = facet(s, i);
  std::vector<Point> facet_basis;
  if (f.simplex.intrinsic_dim() > 0) {
    auto fac = detail::factorize(f.simplex.edge_vectors());
    if (!fac.full_rank) throw DegeneracyError("outward_unit_normal: facet " + std::to_string(i) + " is degenerate");
    facet_basis = std::move(fac.basis);
  }
  Point r = detail::sub(s.vertex(i), f.simplex.vertex(0));
  detail::orthogonalize_against(facet_basis, r);
  const double len = detail::norm(r);
  if (!(len > 0.0)) throw DegeneracyError("outward_unit_normal: vertex lies in the hull of facet " + std::to_string(i));
  for (auto& x : r) x = -x / len;
  return r;
}

/// Largest pairwise vertex distance.
inline double diameter(const Simplex& s) { return s.max_edge_length(); }

}  // namespace minangle
