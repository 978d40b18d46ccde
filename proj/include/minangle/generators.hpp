#pragma once

// Deterministic simplex families: well-shaped references (regular, corner), two
// degenerating families (flatten, needle) and seeded random simplices.
//
// Random draws use SplitMix64 (Steele, Lea & Flood 2014) with the standard
// constants; a double in [0, 1) is (x >> 11) * 2^-53. Each random_simplex call
// seeds a fresh generator with `seed` and draws coordinates vertex by vertex,
// axis by axis, rejecting whole simplices until the quality bound holds.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "minangle/angles.hpp"

namespace minangle {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double next_double() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

namespace detail {

inline void check_dim(std::size_t d, std::size_t min_d) {
  if (d < min_d) throw InputError("dimension must be >= " + std::to_string(min_d));
}

inline void check_scale(double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw InputError("scale must be a positive finite number");
}

inline void check_param(double t) {
  if (!(t > 0.0 && t <= 1.0)) throw InputError("family parameter t must lie in (0, 1]");
}

// Unit-edge regular simplex, built by lifting each new vertex above the centroid
// of the previous ones: after m vertices the circumradius is sqrt((m-1)/(2m)).
inline std::vector<Point> regular_vertices(std::size_t d) {
  std::vector<Point> v(d + 1, Point(d, 0.0));
  Point centroid(d, 0.0);
  for (std::size_t m = 1; m <= d; ++m) {
    const double md = static_cast<double>(m);
    const double circumradius_sq = (md - 1.0) / (2.0 * md);
    v[m] = centroid;
    v[m][m - 1] = std::sqrt(1.0 - circumradius_sq);
    for (std::size_t a = 0; a < d; ++a) centroid[a] = (centroid[a] * md + v[m][a]) / (md + 1.0);
  }
  return v;
}

}  // namespace detail

inline Simplex regular_simplex(std::size_t d, double scale = 1.0) {
  detail::check_dim(d, 2);
  detail::check_scale(scale);
  auto v = detail::regular_vertices(d);
  for (auto& p : v) {
    for (auto& x : p) x *= scale;
  }
  return Simplex(std::move(v));
}

/// conv{0, scale*e_1, ..., scale*e_d}
inline Simplex corner_simplex(std::size_t d, double scale = 1.0) {
  detail::check_dim(d, 2);
  detail::check_scale(scale);
  std::vector<Point> v(d + 1, Point(d, 0.0));
  for (std::size_t i = 1; i <= d; ++i) v[i][i - 1] = scale;
  return Simplex(std::move(v));
}

/// Regular (d-1)-simplex base in x_d = 0 with the apex t*scale above its centroid.
/// t = sqrt((d+1) / (2d)) reproduces the regular d-simplex.
inline Simplex flatten_family(std::size_t d, double t, double scale = 1.0) {
  detail::check_dim(d, 3);
  detail::check_param(t);
  detail::check_scale(scale);
  const auto base = detail::regular_vertices(d - 1);
  std::vector<Point> v;
  v.reserve(d + 1);
  Point apex(d, 0.0);
  for (const auto& b : base) {
    Point p(d, 0.0);
    for (std::size_t a = 0; a + 1 < d; ++a) {
      p[a] = b[a] * scale;
      apex[a] += p[a] / static_cast<double>(d);
    }
    v.push_back(std::move(p));
  }
  apex[d - 1] = t * scale;
  v.push_back(std::move(apex));
  return Simplex(std::move(v));
}

/// Regular simplex with A_1 pulled along edge A_0A_1 to distance t*scale from A_0.
inline Simplex needle_family(std::size_t d, double t, double scale = 1.0) {
  detail::check_dim(d, 2);
  detail::check_param(t);
  auto v = regular_simplex(d, scale).vertices();
  for (std::size_t a = 0; a < d; ++a) v[1][a] = v[0][a] + t * (v[1][a] - v[0][a]);
  return Simplex(std::move(v));
}

inline constexpr std::size_t kRandomSimplexBudget = 10000;

/// Vertices uniform in [0, scale]^d, redrawn until min vertex d-sine > min_quality.
inline Simplex random_simplex(std::size_t d, std::uint64_t seed, double scale = 1.0, double min_quality = 0.0,
                              const ToleranceConfig& cfg = {}) {
  detail::check_dim(d, 2);
  detail::check_scale(scale);
  if (!(min_quality >= 0.0 && min_quality < 1.0)) throw InputError("min_quality must lie in [0, 1)");
  SplitMix64 rng(seed);
  for (std::size_t draw = 0; draw < kRandomSimplexBudget; ++draw) {
    std::vector<Point> v(d + 1, Point(d));
    for (auto& p : v) {
      for (auto& x : p) x = scale * rng.next_double();
    }
    Simplex s(std::move(v));
    if (is_degenerate(s, cfg)) continue;
    if (vertex_sines(s, cfg).min() > min_quality) return s;
  }
  throw GenerationError("random_simplex: no simplex with min d-sine > " + std::to_string(min_quality) + " in " +
                        std::to_string(kRandomSimplexBudget) + " draws");
}

enum class GeneratorKind { regular, corner, flatten, needle, random };

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::regular;
  std::size_t dim = 3;
  double param = 1.0;  // flatten/needle: t in (0, 1]; random: min_quality in [0, 1)
  std::uint64_t seed = 0;
  double scale = 1.0;
};

inline GeneratorKind parse_generator_kind(const std::string& name) {
  if (name == "regular") return GeneratorKind::regular;
  if (name == "corner") return GeneratorKind::corner;
  if (name == "flatten") return GeneratorKind::flatten;
  if (name == "needle") return GeneratorKind::needle;
  if (name == "random") return GeneratorKind::random;
  throw InputError("unknown generator kind \"" + name + "\"");
}

inline Simplex generate(const GeneratorSpec& spec) {
  switch (spec.kind) {
    case GeneratorKind::regular:
      return regular_simplex(spec.dim, spec.scale);
    case GeneratorKind::corner:
      return corner_simplex(spec.dim, spec.scale);
    case GeneratorKind::flatten:
      return flatten_family(spec.dim, spec.param, spec.scale);
    case GeneratorKind::needle:
      return needle_family(spec.dim, spec.param, spec.scale);
    case GeneratorKind::random:
      return random_simplex(spec.dim, spec.seed, spec.scale, spec.param);
  }
  throw InputError("unknown generator kind");
}

}  // namespace minangle
