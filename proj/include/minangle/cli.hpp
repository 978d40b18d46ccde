#pragma once

// Command-line front end. run_cli() is the whole program minus main(), so tests
// can drive it in-process with string streams.
//
// Exit codes: 0 pass, 1 condition violated, 2 input error, 3 degenerate geometry.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "minangle/family.hpp"
#include "minangle/generators.hpp"
#include "minangle/report.hpp"

namespace minangle::cli {

enum ExitCode : int { kPass = 0, kViolated = 1, kInputError = 2, kDegenerate = 3 };

namespace detail {

struct CommonOptions {
  std::string output = "-";
  bool degrees = false;
  double tol = 1e-12;
  std::size_t max_dim = 12;

  ToleranceConfig tolerance() const {
    ToleranceConfig cfg;
    cfg.degeneracy_rel_tol = tol;
    cfg.max_subsimplex_dim = max_dim;
    cfg.angle_unit = degrees ? AngleUnit::degrees : AngleUnit::radians;
    cfg.validate();
    return cfg;
  }

  ReportOptions report_options() const { return ReportOptions{degrees}; }
};

inline void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("-o,--report", o.output, "Output path, '-' for standard output")->capture_default_str();
  cmd->add_flag("--degrees", o.degrees, "Angle thresholds in degrees; add degree annotations to the report");
  cmd->add_option("--tol", o.tol, "Relative degeneracy tolerance")->capture_default_str();
  cmd->add_option("--max-dim", o.max_dim, "Largest cell dimension for subsimplex enumeration")->capture_default_str();
}

// Writes `text` to the path, or to `out` for "-".
inline void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open output file " + path);
  f << text;
  if (!f) throw InputError("failed writing output file " + path);
}

struct ThresholdFlags {
  double alpha0 = 0.0;
  double dsine_min = 0.0;
  CLI::Option* alpha0_opt = nullptr;
  CLI::Option* dsine_opt = nullptr;

  void add(CLI::App* cmd) {
    alpha0_opt = cmd->add_option("--alpha0", alpha0, "Dihedral angle lower bound (radians unless --degrees)");
    dsine_opt = cmd->add_option("--dsine-min", dsine_min, "Vertex d-sine lower bound C in (0, 1]");
  }

  Thresholds resolve(bool degrees) const {
    Thresholds t;
    if (alpha0_opt->count() > 0) t.alpha0 = degrees ? to_radians(alpha0) : alpha0;
    if (dsine_opt->count() > 0) t.dsine_min = dsine_min;
    if (!t.alpha0 && !t.dsine_min) throw InputError("at least one of --alpha0 and --dsine-min is required");
    t.validate();
    return t;
  }
};

inline std::vector<ConditionVerdict> evaluate(const std::vector<CellAssessment>& cells, const Thresholds& t) {
  std::vector<ConditionVerdict> v;
  if (t.alpha0) v.push_back(evaluate_minimum_angle_condition(cells, *t.alpha0));
  if (t.dsine_min) v.push_back(evaluate_generalized_condition(cells, *t.dsine_min));
  return v;
}

inline int verdict_exit(const std::vector<ConditionVerdict>& verdicts) {
  bool degenerate = false;
  bool violated = false;
  for (const auto& v : verdicts) {
    degenerate = degenerate || !v.degenerate_cells.empty();
    violated = violated || !v.satisfied;
  }
  if (degenerate) return kDegenerate;
  return violated ? kViolated : kPass;
}

inline std::string fixed(double v, int digits = 7) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

inline void print_info(const Mesh& mesh, const ToleranceConfig& cfg, bool degrees, std::ostream& out) {
  out << "ambient dimension: " << mesh.ambient_dim << '\n';
  out << "vertices: " << mesh.vertices.size() << '\n';
  out << "cells: " << mesh.cell_count() << '\n';

  const auto conf = conformity_check(mesh);
  if (conf.conforming()) {
    out << "conformity: OK (" << conf.interior_facets << " interior facets, " << conf.boundary_facets
        << " boundary facets)\n";
  } else {
    out << "conformity: VIOLATED (" << conf.violations.size()
        << (conf.violations.size() == 1 ? " facet" : " facets") << " shared by more than two cells)\n";
    for (const auto& v : conf.violations) {
      out << "  facet " << minangle::detail::subset_label(v.facet) << " shared by cells "
          << minangle::detail::subset_label(v.cells) << '\n';
    }
  }

  const auto val = validate_mesh(mesh, cfg);
  if (val.empty()) {
    out << "validation: OK\n";
  } else {
    out << "validation:\n";
    for (auto c : val.degenerate_cells) out << "  degenerate cell " << c << '\n';
    for (auto v : val.unused_vertices) out << "  warning: vertex " << v << " is not used by any cell\n";
    for (auto [a, b] : val.duplicate_cells) out << "  cell " << b << " duplicates cell " << a << '\n';
  }

  const char* unit = degrees ? "deg" : "rad";
  auto angle = [&](double rad) { return fixed(degrees ? to_degrees(rad) : rad); };
  out << "cell  min_dihedral_" << unit << "  max_dihedral_" << unit << "  min_dsine  ball_ratio  dihedral_sum_"
      << unit << '\n';
  for (const auto& c : assess_mesh(mesh, cfg)) {
    out << c.cell_index;
    if (!c.quality) {
      out << "  degenerate: " << c.degeneracy << '\n';
      continue;
    }
    const auto& q = *c.quality;
    out << "  " << angle(q.min_dihedral_all_sub) << "  " << angle(q.max_dihedral_all_sub) << "  "
        << fixed(q.min_vertex_dsine) << "  " << fixed(q.ball_ratio) << "  " << angle(q.dihedral_sum_top) << '\n';
  }
}

}  // namespace detail

inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Minimum angle conditions for d-dimensional simplicial meshes", "minangle"};
  app.require_subcommand(1);

  detail::CommonOptions common;
  detail::ThresholdFlags check_thresholds;
  detail::ThresholdFlags family_thresholds;
  std::string input;
  std::function<int()> action;

  auto* check = app.add_subcommand("check", "Check the minimum angle and/or generalized d-sine condition");
  check->add_option("mesh", input, "Mesh file (JSON)")->required();
  check_thresholds.add(check);
  detail::add_common(check, common);
  check->callback([&] {
    action = [&] {
      const auto mesh = load_mesh(input);
      const auto cfg = common.tolerance();
      const auto t = check_thresholds.resolve(common.degrees);
      auto cells = assess_mesh(mesh, cfg);
      auto verdicts = detail::evaluate(cells, t);
      const int code = detail::verdict_exit(verdicts);
      const auto report = build_report(mesh, std::move(cells), std::move(verdicts));
      detail::emit(common.output, write_report(report, common.report_options()), out);
      return code;
    };
  });

  auto* audit = app.add_subcommand("audit", "Audit both directions of the condition equivalence per cell");
  audit->add_option("mesh", input, "Mesh file (JSON)")->required();
  detail::add_common(audit, common);
  audit->callback([&] {
    action = [&] {
      const auto mesh = load_mesh(input);
      const auto cfg = common.tolerance();
      auto a = equivalence_audit(mesh, cfg);
      const int code = a.any_degenerate() ? kDegenerate : (a.all_margins_ok() ? kPass : kViolated);
      const auto report = build_report(mesh, assess_mesh(mesh, cfg), {}, std::move(a));
      detail::emit(common.output, write_report(report, common.report_options()), out);
      return code;
    };
  });

  auto* family = app.add_subcommand("family", "Evaluate the conditions across a family of meshes");
  family->add_option("manifest", input, "Family manifest (JSON)")->required();
  family_thresholds.add(family);
  detail::add_common(family, common);
  family->callback([&] {
    action = [&] {
      const auto cfg = common.tolerance();
      const auto t = family_thresholds.resolve(common.degrees);
      const auto manifest = load_manifest(input);
      std::vector<std::pair<std::string, Mesh>> meshes;
      for (const auto& p : manifest.meshes) meshes.emplace_back(p.generic_string(), load_mesh(p));
      const auto fr = assess_family(meshes, t, cfg);
      detail::emit(common.output, family_report_to_json(fr, common.report_options()).dump(2) + "\n", out);
      if (fr.any_degenerate()) return static_cast<int>(kDegenerate);
      for (const auto& v : fr.verdicts) {
        if (!v.verdict.satisfied) return static_cast<int>(kViolated);
      }
      return static_cast<int>(kPass);
    };
  });

  GeneratorSpec spec;
  std::string kind;
  std::string gen_output = "-";
  auto* gen = app.add_subcommand("generate", "Write a single-cell mesh from a simplex family");
  gen->add_option("--kind", kind, "regular | corner | flatten | needle | random")->required();
  gen->add_option("--dim", spec.dim, "Dimension d >= 2")->required();
  auto* param_opt = gen->add_option("--param", spec.param, "flatten/needle: t in (0, 1]; random: min d-sine in [0, 1)");
  gen->add_option("--seed", spec.seed, "Seed for --kind random")->capture_default_str();
  gen->add_option("--scale", spec.scale, "Edge scale")->capture_default_str();
  gen->add_option("-o,--output", gen_output, "Output path, '-' for standard output")->capture_default_str();
  gen->callback([&] {
    action = [&] {
      spec.kind = parse_generator_kind(kind);
      if (param_opt->count() == 0) {
        if (spec.kind == GeneratorKind::flatten || spec.kind == GeneratorKind::needle) {
          throw InputError("--kind " + kind + " needs --param t");
        }
        spec.param = spec.kind == GeneratorKind::random ? 0.0 : 1.0;
      }
      detail::emit(gen_output, write_mesh(single_cell_mesh(generate(spec))), out);
      return static_cast<int>(kPass);
    };
  });

  bool info_degrees = false;
  double info_tol = 1e-12;
  auto* info = app.add_subcommand("info", "Print mesh summary, conformity and per-cell quality");
  info->add_option("mesh", input, "Mesh file (JSON)")->required();
  info->add_flag("--degrees", info_degrees, "Print angles in degrees");
  info->add_option("--tol", info_tol, "Relative degeneracy tolerance")->capture_default_str();
  info->callback([&] {
    action = [&] {
      const auto mesh = load_mesh(input);
      ToleranceConfig cfg;
      cfg.degeneracy_rel_tol = info_tol;
      cfg.validate();
      detail::print_info(mesh, cfg, info_degrees, out);
      return static_cast<int>(kPass);
    };
  });

  std::reverse(args.begin(), args.end());
  try {
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kInputError;
  }

  try {
    return action();
  } catch (const InputError& e) {
    err << "minangle: " << e.what() << '\n';
    return kInputError;
  } catch (const GenerationError& e) {
    err << "minangle: " << e.what() << '\n';
    return kInputError;
  } catch (const DegeneracyError& e) {
    err << "minangle: " << e.what() << '\n';
    return kDegenerate;
  } catch (const std::exception& e) {
    err << "minangle: " << e.what() << '\n';
    return kInputError;
  }
}

inline int run_cli(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(std::move(args), out, err);
}

}  // namespace minangle::cli
