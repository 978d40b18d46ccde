// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.
//
//   acceptance --cli <path to minangle> --data <data dir> --work <scratch dir>

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "minangle/minangle.hpp"
#include "oracles.hpp"

using namespace minangle;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Worst observed value of a quantity and the sample it came from.
struct Worst {
  double value;
  bool larger_is_worse;
  std::string where;

  void see(double v, const std::string& at) {
    if (larger_is_worse ? v > value : v < value) {
      value = v;
      where = at;
    }
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string label(std::size_t d, std::uint64_t seed) {
  return "d=" + std::to_string(d) + " seed=" + std::to_string(seed);
}

// The shared sample for criteria 2, 4, 5 and 7.
struct Sample {
  std::size_t d;
  std::uint64_t seed;
  Simplex s;
};

std::vector<Sample> product_sample() {
  std::vector<Sample> out;
  for (std::size_t d = 3; d <= 6; ++d) {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) out.push_back({d, seed, random_simplex(d, seed, 1.0, 1e-3)});
  }
  return out;
}

std::vector<Simplex> flatten_sample() {
  std::vector<Simplex> out;
  for (int k = 1; k <= 10; ++k) out.push_back(flatten_family(3, std::ldexp(1.0, -k)));
  return out;
}

Outcome classical_sine() {
  Worst err{0.0, true, ""};
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto s = random_simplex(2, seed);
    const auto sines = vertex_sines(s);
    for (std::size_t i = 0; i < 3; ++i) {
      err.see(std::abs(sines.sines[i] - std::sin(oracle::planar_angle(s.vertices(), i))), label(2, seed));
    }
  }
  return {err.value < 1e-12, "1000 triangles, max |sin_2 - sin| = " + fmt(err.value)};
}

Outcome product_formula(const std::vector<Sample>& sample) {
  Worst res{0.0, true, ""};
  for (const auto& [d, seed, s] : sample) {
    for (std::size_t i = 0; i < d; ++i) res.see(product_decomposition(s, i).relative_residual, label(d, seed));
    // The last vertex, after moving it to the front.
    auto v = s.vertices();
    std::swap(v.front(), v.back());
    res.see(product_decomposition(Simplex(std::move(v)), 0).relative_residual, label(d, seed));
  }
  return {res.value < 1e-9, std::to_string(sample.size()) + " simplices, d=3..6, max relative residual = " +
                                fmt(res.value) + (res.where.empty() ? "" : " (" + res.where + ")")};
}

Outcome closed_forms() {
  Outcome o;
  auto expect = [&o](const std::string& what, double got, double want, double tol) {
    if (!(std::abs(got - want) <= tol)) {
      o.pass = false;
      o.detail += what + ": got " + std::to_string(got) + ", want " + std::to_string(want) + "; ";
    }
  };
  const auto tet = regular_simplex(3);
  for (const auto& e : all_dihedral_angles(tet).angles) expect("regular tetrahedron dihedral", e.angle, std::acos(1.0 / 3), 1e-10);
  for (std::size_t d = 2; d <= 8; ++d) {
    for (const auto& e : all_dihedral_angles(regular_simplex(d)).angles) {
      expect("regular " + std::to_string(d) + "-simplex dihedral", e.angle, std::acos(1.0 / static_cast<double>(d)), 1e-10);
    }
    expect("corner " + std::to_string(d) + "-simplex d-sine", d_sine(corner_simplex(d), 0), 1.0, 1e-12);
  }
  expect("regular tetrahedron min d-sine", vertex_sines(tet).min(), 4.0 / (3.0 * std::sqrt(3.0)), 1e-10);
  expect("regular tetrahedron inradius", inradius(tet), 1.0 / (2.0 * std::sqrt(6.0)), 1e-10);
  if (o.pass) o.detail = "dihedral arccos(1/d) for d=2..8, tetrahedron d-sine 4/(3*sqrt 3), corner d-sine 1, inradius 1/(2*sqrt 6)";
  return o;
}

Outcome forward_inequality(const std::vector<Sample>& sample) {
  Worst gap{kPi, false, ""};
  Worst sub{kPi, false, ""};
  for (const auto& [d, seed, s] : sample) {
    const double c = min_vertex_dsine(s);
    for (const auto& e : all_dihedral_angles(s).angles) gap.see(std::sin(e.angle) - c, label(d, seed));
    sub.see(audit_simplex(s).forward_margin, label(d, seed));
  }
  const bool pass = gap.value >= -1e-9 && sub.value >= -1e-9;
  return {pass, "min over sample of sin(beta) - min d-sine = " + fmt(gap.value) +
                    "; same over every subsimplex = " + fmt(sub.value)};
}

Outcome backward_bound(const std::vector<Sample>& sample) {
  Worst gap{kPi, false, ""};
  for (const auto& [d, seed, s] : sample) {
    double smin = 1.0;
    for (const auto& sub : subsimplices(s)) {
      for (const auto& e : all_dihedral_angles(project_intrinsic(sub.simplex)).angles) smin = std::min(smin, std::sin(e.angle));
    }
    const double bound = std::pow(smin, static_cast<double>(d * (d - 1) / 2));
    gap.see(min_vertex_dsine(s) - bound, label(d, seed));
  }
  return {gap.value >= -1e-9, "min over sample of min d-sine - s^(d(d-1)/2) = " + fmt(gap.value) +
                                  (gap.where.empty() ? "" : " (" + gap.where + ")")};
}

Outcome degeneration_trend(const std::vector<Simplex>& flat) {
  Outcome o;
  double prev_sine = 2.0;
  double prev_angle = 2.0 * kPi;
  for (std::size_t k = 0; k < flat.size(); ++k) {
    const auto q = assess_simplex(flat[k]);
    if (!(q.min_vertex_dsine < prev_sine) || !(q.min_dihedral_all_sub < prev_angle)) {
      o.pass = false;
      o.detail += "not strictly decreasing at t=2^-" + std::to_string(k + 1) + "; ";
    }
    prev_sine = q.min_vertex_dsine;
    prev_angle = q.min_dihedral_all_sub;
  }
  const auto last = assess_simplex(flat.back());
  if (!(last.min_vertex_dsine < 1e-3)) o.pass = false;
  if (!(last.max_dihedral_all_sub > kPi - 0.1)) o.pass = false;
  o.detail += "t=2^-10: min d-sine = " + fmt(last.min_vertex_dsine) + ", min dihedral = " +
              fmt(last.min_dihedral_all_sub) + ", max dihedral = pi - " + fmt(kPi - last.max_dihedral_all_sub);
  return o;
}

Outcome dihedral_sum(const std::vector<Sample>& sample, const std::vector<Simplex>& flat) {
  double lo = 4.0 * kPi;
  double hi = 0.0;
  std::size_t count = 0;
  auto see = [&](const Simplex& s) {
    const double sum = dihedral_sum(s);
    lo = std::min(lo, sum);
    hi = std::max(hi, sum);
    ++count;
  };
  for (const auto& smp : sample) {
    if (smp.d == 3) see(smp.s);
  }
  for (const auto& s : flat) see(s);
  return {lo > 2.0 * kPi && hi < 3.0 * kPi,
          std::to_string(count) + " tetrahedra, min sum - 2 pi = " + fmt(lo - 2.0 * kPi) + ", 3 pi - max sum = " +
              fmt(3.0 * kPi - hi)};
}

Outcome invariance() {
  std::mt19937_64 rng(20261019);
  Worst err{0.0, true, ""};
  for (std::size_t d = 2; d <= 5; ++d) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const auto s = random_simplex(d, 5000 + seed);
      const auto sines = vertex_sines(s).sines;
      const auto angles = all_dihedral_angles(s).angles;
      const auto rot = oracle::random_rotation(d, rng);
      const auto shift = oracle::random_points(1, d, rng, -10, 10).front();
      const double lambda = std::exp(std::uniform_real_distribution<double>(-7, 7)(rng));
      for (const auto& moved : {oracle::rigid_motion(s.vertices(), rot, shift), oracle::scaled(s.vertices(), lambda)}) {
        const Simplex m(moved);
        const auto ms = vertex_sines(m).sines;
        const auto ma = all_dihedral_angles(m).angles;
        for (std::size_t i = 0; i < sines.size(); ++i) err.see(oracle::rel_diff(ms[i], sines[i]), label(d, seed));
        for (std::size_t i = 0; i < angles.size(); ++i) err.see(oracle::rel_diff(ma[i].angle, angles[i].angle), label(d, seed));
      }
    }
  }
  return {err.value < 1e-9, "400 simplices, d=2..5, max relative change = " + fmt(err.value) +
                                (err.where.empty() ? "" : " (" + err.where + ")")};
}

std::string shell_quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

Outcome cli_contract(const fs::path& cli, const fs::path& data, const fs::path& work) {
  fs::create_directories(work);
  const auto mesh = [&](const std::string& n) { return (data / "meshes" / (n + ".json")).string(); };
  const auto family = [&](const std::string& n) { return (data / "families" / (n + ".json")).string(); };

  struct Row {
    std::string name;
    std::vector<std::string> args;
    std::vector<int> allowed;
    bool writes_report;
  };
  const std::vector<Row> rows = {
      {"check_regular_pass", {"check", mesh("regular_tet"), "--alpha0", "1.0"}, {0}, true},
      {"check_regular_violated", {"check", mesh("regular_tet"), "--alpha0", "1.1"}, {1}, true},
      {"check_missing", {"check", mesh("missing"), "--alpha0", "1.0"}, {2}, false},
      {"check_no_threshold", {"check", mesh("regular_tet")}, {2}, false},
      {"check_corner", {"check", mesh("corner_tet"), "--alpha0", "0.6", "--dsine-min", "0.5"}, {0}, true},
      {"check_glued_pair", {"check", mesh("glued_pair"), "--alpha0", "0.7", "--dsine-min", "0.5"}, {0}, true},
      {"check_glued_pair_violated", {"check", mesh("glued_pair"), "--dsine-min", "0.6"}, {1}, true},
      {"check_triple", {"check", mesh("nonconforming_triple"), "--dsine-min", "0.3"}, {0}, true},
      {"check_sliver", {"check", mesh("sliver"), "--dsine-min", "0.1"}, {1, 3}, true},
      {"check_sliver_loose_tol", {"check", mesh("sliver"), "--dsine-min", "0.1", "--tol", "1e-3"}, {3}, true},
      {"audit_regular", {"audit", mesh("regular_tet")}, {0}, true},
      {"audit_corner", {"audit", mesh("corner_tet")}, {0}, true},
      {"audit_glued_pair", {"audit", mesh("glued_pair")}, {0}, true},
      {"audit_triple", {"audit", mesh("nonconforming_triple")}, {0}, true},
      {"audit_sliver", {"audit", mesh("sliver")}, {0, 3}, true},
      {"audit_sliver_loose_tol", {"audit", mesh("sliver"), "--tol", "1e-3"}, {0, 3}, true},
      {"family_flatten", {"family", family("flatten"), "--dsine-min", "0.5"}, {1}, true},
      {"family_regular_copies", {"family", family("regular_copies"), "--alpha0", "1.0"}, {0}, true},
      {"family_mixed_dimensions", {"family", family("mixed_dimensions"), "--alpha0", "1.0"}, {2}, false},
      {"info_triple", {"info", mesh("nonconforming_triple")}, {0}, false},
      {"info_malformed", {"info", (data / "families" / "flatten.json").string()}, {2}, false},
      {"generate_random", {"generate", "--kind", "random", "--dim", "4", "--seed", "3"}, {0}, false},
      {"generate_invalid", {"generate", "--kind", "flatten", "--dim", "3", "--param", "2"}, {2}, false},
  };

  Outcome o;
  std::size_t ran = 0;
  for (const auto& row : rows) {
    std::string out[2];
    for (int rep = 0; rep < 2; ++rep) {
      const auto path = work / (row.name + "_" + std::to_string(rep) + ".out");
      std::string cmd = shell_quote(cli.string());
      for (const auto& a : row.args) cmd += " " + shell_quote(a);
      cmd += row.writes_report ? " -o " + shell_quote(path.string()) : " > " + shell_quote(path.string());
      cmd += " 2>/dev/null";
      const int status = std::system(cmd.c_str());
      const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
      if (std::find(row.allowed.begin(), row.allowed.end(), code) == row.allowed.end()) {
        o.pass = false;
        o.detail += row.name + " exited " + std::to_string(code) + "; ";
      }
      out[rep] = slurp(path);
    }
    if (out[0] != out[1]) {
      o.pass = false;
      o.detail += row.name + " output differs between runs; ";
    }
    if (row.writes_report && out[0].empty()) {
      o.pass = false;
      o.detail += row.name + " wrote no report; ";
    }
    ++ran;
  }
  if (o.pass) o.detail = std::to_string(ran) + " invocations, each run twice with identical output";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria", "acceptance"};
  std::string cli_path, data_dir, work_dir;
  app.add_option("--cli", cli_path, "Path to the minangle executable")->required();
  app.add_option("--data", data_dir, "Directory holding meshes/ and families/")->required();
  app.add_option("--work", work_dir, "Scratch directory for reports")->required();
  CLI11_PARSE(app, argc, argv);

  const auto start = std::chrono::steady_clock::now();
  const auto sample = product_sample();
  const auto flat = flatten_sample();

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"classical-sine reduction", classical_sine},
      {"product formula", [&] { return product_formula(sample); }},
      {"closed-form oracles", closed_forms},
      {"forward inequality", [&] { return forward_inequality(sample); }},
      {"backward certified bound", [&] { return backward_bound(sample); }},
      {"degeneration trend", [&] { return degeneration_trend(flat); }},
      {"d=3 dihedral-sum range", [&] { return dihedral_sum(sample, flat); }},
      {"invariance", invariance},
      {"CLI contract", [&] { return cli_contract(cli_path, data_dir, work_dir); }},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << " [PRIMARY] " << criteria[i].first << ": "
              << o.detail << std::endl;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << "elapsed " << fmt(seconds) << " s" << std::endl;
  if (seconds >= 60.0) {
    std::cout << "FAIL runtime exceeds 60 s" << std::endl;
    ++failures;
  }
  return failures == 0 ? 0 : 1;
}
