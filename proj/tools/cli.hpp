/// @file cli.hpp
/// @brief the `surfarea` experiment runner: one subcommand per module,
///        CSV tables with `#` metadata lines

#pragma once

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "surfarea/surfarea.hpp"
#include "surfarea/verify.hpp"

namespace surfarea::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2 };

/// Bad input discovered after CLI11 parsing (missing field source, ...).
class UsageError : public Error {
 public:
  using Error::Error;
};

namespace detail {

struct FieldSource {
  std::string descriptor;
  std::string grid_path;
  std::vector<double> domain;

  void add_to(CLI::App* app, const std::string& suffix = "") {
    app->add_option("--field" + suffix, descriptor, "field descriptor, e.g. plane(1,2,0)");
    app->add_option("--grid" + suffix, grid_path, "grid field file");
    if (suffix.empty()) app->add_option("--domain", domain, "a b c d (overrides a builtin's domain)")->expected(4);
  }

  std::string label() const { return grid_path.empty() ? descriptor : "grid:" + grid_path; }

  ScalarField load(const std::string& flag = "--field") const {
    if (descriptor.empty() == grid_path.empty())
      throw UsageError("give exactly one of " + flag + " or --grid" + flag.substr(7));
    if (!grid_path.empty()) {
      std::ifstream in(grid_path);
      if (!in) throw UsageError("cannot open grid file '" + grid_path + "'");
      return parse_grid_field(in, grid_path).to_field(grid_path);
    }
    std::optional<Domain> dom;
    if (!domain.empty()) dom = Rect(domain[0], domain[1], domain[2], domain[3]);
    return make_field(descriptor, dom);
  }
};

inline std::optional<Rect> rect_option(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  return Rect(v[0], v[1], v[2], v[3]);
}

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

inline std::string verdict(bool converged) { return converged ? "CONVERGED" : "NOT_CONVERGED"; }

}  // namespace detail

/// Parses args (without the program name), runs one subcommand and returns
/// the exit code: 0 success, 1 computation-level failure (including a
/// failed --require-* flag), 2 usage or parse error.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Surface area laboratory: Geöcze sums, Tonelli variation, mollifiers, the Schwarz lantern, Steiner's inequality",
               "surfarea"};
  app.require_subcommand(1);

  std::string output;
  unsigned threads = 1;
  auto common = [&](CLI::App* sub) {
    sub->add_option("-o,--output", output, "write CSV here instead of standard output");
    sub->add_option("--threads", threads, "worker threads for data-parallel sums")->check(CLI::Range(1u, 256u));
  };

  // area
  auto* area = app.add_subcommand("area", "Geöcze or quasi-linear area ladder of a field");
  detail::FieldSource area_src;
  area_src.add_to(area);
  int area_levels = 7, area_order = 8;
  double area_tol = 1e-4;
  std::string area_method = "geocze";
  std::vector<double> area_region;
  bool area_require = false;
  area->add_option("--levels", area_levels, "finest dyadic level")->check(CLI::Range(0, 14));
  area->add_option("--order", area_order, "Gauss-Legendre order per panel")->check(CLI::Range(2, 16));
  area->add_option("--tol", area_tol, "relative convergence tolerance")->check(CLI::PositiveNumber);
  area->add_option("--method", area_method, "geocze or quasilinear")->check(CLI::IsMember({"geocze", "quasilinear"}));
  area->add_option("--region", area_region, "a b c d sub-rectangle to subdivide")->expected(4);
  area->add_flag("--require-converged", area_require, "exit 1 unless the ladder converged");
  common(area);

  // lantern
  auto* lantern = app.add_subcommand("lantern", "Schwarz lantern areas along a refinement path or at one (m,n)");
  std::string lantern_path = "diagonal";
  int lantern_steps = 8;
  double lantern_c = 1.0;
  std::int64_t lantern_m = 0, lantern_n = 8;
  bool lantern_require = false, lantern_oracle = false;
  lantern->add_option("--path", lantern_path, "diagonal, parabolic, n_first or m_first")
      ->check(CLI::IsMember({"diagonal", "parabolic", "n_first", "m_first"}));
  lantern->add_option("--steps", lantern_steps, "number of path points");
  lantern->add_option("--c", lantern_c, "parabolic path constant");
  lantern->add_option("--m", lantern_m, "single lantern: slices (disables --path)");
  lantern->add_option("--n", lantern_n, "single lantern sectors, or the fixed n of m_first");
  lantern->add_flag("--oracle", lantern_oracle, "single lantern: also sum the explicit triangles");
  lantern->add_flag("--require-finite", lantern_require, "exit 1 if the path diverges");
  common(lantern);

  // tonelli
  auto* tonelli = app.add_subcommand("tonelli", "Tonelli variations, the classical area integral and the ACT residual");
  detail::FieldSource ton_src;
  ton_src.add_to(tonelli);
  int ton_levels = 12, ton_ladder = 7;
  double ton_fd = kDefaultFdStep;
  bool ton_require = false;
  tonelli->add_option("--levels", ton_levels, "dyadic variation levels")->check(CLI::Range(0, kMaxVariationLevel));
  tonelli->add_option("--ladder-levels", ton_ladder, "Geöcze ladder depth for the ACT residual")->check(CLI::Range(0, 14));
  tonelli->add_option("--fd", ton_fd, "finite-difference step")->check(CLI::PositiveNumber);
  tonelli->add_flag("--require-bvt", ton_require, "exit 1 if the sectional variation diverges");
  common(tonelli);

  // mollify
  auto* mollify = app.add_subcommand("mollify", "integral means f_h: L1 norms, uniform distance, area");
  detail::FieldSource mol_src;
  mol_src.add_to(mollify);
  std::vector<double> mol_h{0.1, 0.05, 0.025};
  std::string mol_mode = "direct";
  int mol_grid_level = 7, mol_panels = 4;
  bool mol_area = false, mol_require = false;
  mollify->add_option("--radius", mol_h, "window radii h")->delimiter(',');
  mollify->add_option("--mode", mol_mode, "direct or grid")->check(CLI::IsMember({"direct", "grid"}));
  mollify->add_option("--grid-level", mol_grid_level, "grid mode: 2^k+1 nodes per axis")->check(CLI::Range(1, 12));
  mollify->add_option("--window-panels", mol_panels, "panels per axis of the window rule")->check(CLI::Range(1, 256));
  mollify->add_flag("--area", mol_area, "add Geöcze areas of f_h on the centered sub-square and of f");
  mollify->add_flag("--require-contraction", mol_require, "exit 1 if some L1 norm grows");
  common(mollify);

  // steiner
  auto* steiner = app.add_subcommand("steiner", "Steiner midpoint gap of two fields along the dyadic ladder");
  detail::FieldSource st1, st2;
  st1.add_to(steiner, "1");
  st2.add_to(steiner, "2");
  int st_levels = 6;
  bool st_require = false;
  steiner->add_option("--levels", st_levels, "finest dyadic level")->check(CLI::Range(0, 12));
  steiner->add_flag("--require-holds", st_require, "exit 1 if some gap is below -1e-9");
  common(steiner);

  // onevar
  auto* onevar = app.add_subcommand("onevar", "one-variable functions with removable defects");
  std::string ov_base = "x";
  std::vector<std::string> ov_defects;
  std::vector<double> ov_interval{0.0, 1.0};
  int ov_levels = 16;
  double ov_fd = kDefaultFdStep;
  onevar->add_option("--base", ov_base, "x, parabola, step(s) or cantor(k|exact)");
  onevar->add_option("--defects", ov_defects, "t:value pairs, comma separated")->delimiter(',');
  onevar->add_option("--interval", ov_interval, "a b")->expected(2);
  onevar->add_option("--levels", ov_levels, "dyadic levels")->check(CLI::Range(0, kMaxVariationLevel));
  onevar->add_option("--fd", ov_fd, "finite-difference step")->check(CLI::PositiveNumber);
  common(onevar);

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "seeded property suites or the acceptance criteria");
  std::string v_suite = "all";
  int v_criterion = 0;
  std::uint64_t v_seed = 42;
  std::vector<std::string> suite_choices = verify::suite_names();
  suite_choices.push_back("all");
  suite_choices.push_back("acceptance");
  verify_cmd->add_option("--suite", v_suite, "module suite, all, or acceptance")->check(CLI::IsMember(suite_choices));
  verify_cmd->add_option("--criterion", v_criterion, "acceptance criterion id (default: all)")->check(CLI::Range(0, 15));
  verify_cmd->add_option("--seed", v_seed, "seed of the randomized checks");
  common(verify_cmd);

  if (!args.empty() && !args[0].empty() && args[0][0] != '-' && app.get_subcommand_no_throw(args[0]) == nullptr) {
    err << "unknown subcommand '" << args[0] << "'\nRun with --help for more information.\n";
    return kUsage;
  }

  std::vector<const char*> argv{"surfarea"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    std::ofstream file;
    if (!output.empty()) {
      file.open(output);
      if (!file) throw UsageError("cannot write '" + output + "'");
    }
    std::ostream& os = output.empty() ? out : file;
    int status = kOk;

    if (area->parsed()) {
      const ScalarField f = area_src.load();
      os << "# command=area field=" << area_src.label() << " method=" << area_method << " levels=" << area_levels
         << " tol=" << format_real(area_tol) << '\n';
      bool converged = false;
      double estimate = 0.0;
      if (area_method == "geocze") {
        LadderOptions lo{area_levels, area_order, area_tol, threads, detail::rect_option(area_region)};
        const GeoczeLadder l = geocze_area(f, lo);
        write_ladder_csv(os, l);
        converged = l.converged;
        estimate = l.estimate;
        if (l.converged_level) os << "# converged_level=" << *l.converged_level << '\n';
      } else {
        if (!area_region.empty()) throw UsageError("--region applies to --method geocze only");
        if (area_levels > kMaxInterpolationLevel) throw UsageError("quasi-linear levels are limited to 11");
        os << "level,triangles,area\n";
        double prev = 0.0;
        for (int k = 0; k <= area_levels; ++k) {
          const QuasiLinearFn pi = interpolate_quasilinear(f, k);
          estimate = elementary_area(pi);
          os << k << ',' << pi.size() << ',' << format_real(estimate) << '\n';
          converged = k > 0 && std::abs(estimate - prev) < area_tol * std::abs(estimate);
          prev = estimate;
        }
      }
      os << "# estimate=" << format_real(estimate) << "\n# verdict=" << detail::verdict(converged) << '\n';
      if (area_require && !converged) status = kFailure;
    } else if (lantern->parsed()) {
      if (lantern_m > 0) {
        const LanternSpec s{lantern_m, lantern_n};
        os << "# command=lantern m=" << lantern_m << " n=" << lantern_n << '\n';
        os << (lantern_oracle ? "m,n,triangles,area,oracle\n" : "m,n,triangles,area\n");
        os << s.m << ',' << s.n << ',' << s.triangles() << ',' << format_real(lantern_area(s));
        if (lantern_oracle) os << ',' << format_real(lantern_vertex_oracle(s));
        os << '\n';
      } else {
        LanternPath p;
        p.kind = lantern_path == "diagonal"    ? LanternPathKind::Diagonal
                 : lantern_path == "parabolic" ? LanternPathKind::Parabolic
                 : lantern_path == "n_first"   ? LanternPathKind::NFirst
                                               : LanternPathKind::MFirst;
        p.steps = lantern_steps;
        p.c = lantern_c;
        p.n_fixed = lantern_n;
        const LanternLimit l = lantern_limit(p);
        os << "# command=lantern path=" << lantern_path << " steps=" << lantern_steps;
        if (p.kind == LanternPathKind::Parabolic) os << " c=" << format_real(lantern_c);
        if (p.kind == LanternPathKind::MFirst) os << " n=" << lantern_n;
        os << '\n';
        write_lantern_csv(os, l);
        const double ref = lantern_path_reference(p);
        os << "# reference=" << (std::isinf(ref) ? std::string("inf") : format_real(ref, 10)) << '\n';
        if (!l.divergent) os << "# spread=" << format_real(l.spread, 6) << '\n';
        os << "# verdict=" << (l.divergent ? "DIVERGENT" : "CONVERGED") << '\n';
        if (lantern_require && l.divergent) status = kFailure;
      }
    } else if (tonelli->parsed()) {
      const ScalarField f = ton_src.load();
      VariationOptions vo;
      vo.levels = ton_levels;
      vo.threads = threads;
      const VariationReport r = v_T(f, vo);
      os << "# command=tonelli field=" << ton_src.label() << " levels=" << ton_levels << '\n';
      write_variation_csv(os, r);
      os << "# V_T=" << format_real(r.V_T) << "\n# divergent=" << (r.divergent ? "true" : "false") << '\n';
      if (r.divergent) {
        os << "# verdict=NOT_BVT\n";
        if (ton_require) status = kFailure;
      } else {
        LadderOptions lo;
        lo.max_level = ton_ladder;
        lo.threads = threads;
        const ActResidual a = act_residual(f, lo, {64, 8}, ton_fd);
        os << "# geocze_estimate=" << format_real(a.geocze_estimate) << "\n# lower_bound=" << format_real(a.lower_bound)
           << "\n# act_residual=" << format_real(a.value) << "\n# ladder=" << detail::verdict(a.ladder_converged)
           << "\n# verdict=BVT\n";
      }
    } else if (mollify->parsed()) {
      const ScalarField f = mol_src.load();
      MollifyOptions mo;
      mo.window.panels = mol_panels;
      mo.mode = mol_mode == "grid" ? MollifyMode::Grid : MollifyMode::Direct;
      mo.grid_level = mol_grid_level;
      os << "# command=mollify field=" << mol_src.label() << " mode=" << mol_mode << '\n';
      os << (mol_area ? "h,l1_fh,l1_f,sup_dist,area_fh,area_f\n" : "h,l1_fh,l1_f,sup_dist\n");
      const double l1f = l1_norm(f);
      const Rect sub = centered_subsquare(f.domain());
      LadderOptions full;
      full.threads = threads;
      const double area_f = mol_area ? geocze_area(f, full).estimate : 0.0;
      bool contraction = true;
      for (double h : mol_h) {
        const ScalarField fh = integral_mean(f, h, mo);
        const double l1h = l1_norm(fh);
        contraction = contraction && l1h <= l1f + 1e-6;
        os << format_real(h) << ',' << format_real(l1h) << ',' << format_real(l1f) << ','
           << format_real(sup_distance(fh, f, 64, sub));
        if (mol_area) {
          LadderOptions lo;
          lo.region = sub;
          lo.threads = threads;
          os << ',' << format_real(geocze_area(fh, lo).estimate) << ',' << format_real(area_f);
        }
        os << '\n';
      }
      os << "# verdict=" << (contraction ? "CONTRACTION" : "L1_GROWTH") << '\n';
      if (mol_require && !contraction) status = kFailure;
    } else if (steiner->parsed()) {
      const ScalarField f1 = st1.load("--field1"), f2 = st2.load("--field2");
      os << "# command=steiner field1=" << st1.label() << " field2=" << st2.label() << " levels=" << st_levels << '\n';
      os << "level,G1,G2,G_mid,gap\n";
      if (!(f1.domain() == f2.domain())) throw InvalidArgument("steiner: fields must share a domain");
      const ScalarField mid = midpoint(f1, f2);
      double min_gap = HUGE_VAL;
      for (int k = 0; k <= st_levels; ++k) {
        const Subdivision d = Subdivision::dyadic(f1.domain(), k);
        const QuadratureSpec q{ladder_panels(k), 8};
        const double g1 = geocze_sum(f1, d, q, threads), g2 = geocze_sum(f2, d, q, threads);
        const double gm = geocze_sum(mid, d, q, threads);
        const double gap = 0.5 * (g1 + g2) - gm;
        min_gap = std::min(min_gap, gap);
        os << k << ',' << format_real(g1) << ',' << format_real(g2) << ',' << format_real(gm) << ',' << format_real(gap)
           << '\n';
      }
      os << "# min_gap=" << format_real(min_gap) << "\n# flatness_residual=" << format_real(equality_flatness_residual(f1, f2))
         << "\n# verdict=" << (min_gap >= -1e-9 ? "HOLDS" : "VIOLATED") << '\n';
      if (st_require && min_gap < -1e-9) status = kFailure;
    } else if (onevar->parsed()) {
      std::vector<std::pair<double, double>> defects;
      for (const std::string& tok : ov_defects) {
        const auto colon = tok.find(':');
        std::size_t used1 = 0, used2 = 0;
        try {
          if (colon == std::string::npos) throw std::invalid_argument(tok);
          const double t = std::stod(tok.substr(0, colon), &used1);
          const double v = std::stod(tok.substr(colon + 1), &used2);
          if (used1 != colon || used2 != tok.size() - colon - 1) throw std::invalid_argument(tok);
          defects.emplace_back(t, v);
        } catch (const std::logic_error&) {
          throw UsageError("bad defect '" + tok + "', expected t:value");
        }
      }
      const DefectedFn1D g(make_base_1d(ov_base), defects, ov_interval[0], ov_interval[1]);
      os << "# command=onevar base=" << ov_base << " defects=" << defects.size() << '\n';
      os << "level,pointwise,generalized\n";
      const auto pointwise = variation_by_level([&](double t) { return g(t); }, g.a(), g.b(), ov_levels);
      const auto general = variation_by_level(
          [&](double t) { return g.is_defect(t) ? g.approximate_value(t) : g(t); }, g.a(), g.b(), ov_levels);
      for (int k = 0; k <= ov_levels; ++k)
        os << k << ',' << format_real(pointwise[k]) << ',' << format_real(general[k]) << '\n';
      const DerivativeGap d = essential_derivative_gap(g, {64, 8}, ov_fd, ov_levels);
      os << "# generalized_variation=" << format_real(d.variation) << "\n# derivative_integral="
         << format_real(d.derivative_integral) << "\n# gap=" << format_real(d.gap) << '\n';
    } else if (verify_cmd->parsed()) {
      const verify::VerifyOptions vo{v_seed, threads};
      std::vector<verify::SuiteReport> reports;
      if (v_suite == "acceptance") {
        reports.push_back(verify::run_acceptance(vo, v_criterion));
      } else {
        if (v_criterion != 0) throw UsageError("--criterion needs --suite acceptance");
        for (const std::string& s : verify::suite_names())
          if (v_suite == "all" || v_suite == s) reports.push_back(verify::run_suite(s, vo));
      }
      os << "# command=verify suite=" << v_suite << " seed=" << v_seed << '\n';
      os << "suite,check,result,detail\n";
      int passed = 0, failed = 0;
      for (const verify::SuiteReport& r : reports) {
        for (const verify::Check& c : r.checks)
          os << r.suite << ',' << detail::csv_quote(c.name) << ',' << (c.passed ? "PASS" : "FAIL") << ','
             << detail::csv_quote(c.detail) << '\n';
        passed += r.passed();
        failed += r.failed();
      }
      os << "# passed=" << passed << " failed=" << failed << '\n';
      if (failed > 0) status = kFailure;
    }
    os.flush();
    return status;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const InvalidArgument& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace surfarea::cli
