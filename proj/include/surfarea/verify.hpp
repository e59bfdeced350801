/// @file verify.hpp
/// @brief seeded property suites for every module and the numbered
///        acceptance gate, shared by `surfarea verify` and the test binary

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cantor.hpp"
#include "fields.hpp"
#include "format.hpp"
#include "geocze.hpp"
#include "lantern.hpp"
#include "mollify.hpp"
#include "quasilinear.hpp"
#include "steiner.hpp"
#include "tonelli.hpp"

namespace surfarea::verify {

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<Check> checks;

  int passed() const {
    int n = 0;
    for (const Check& c : checks) n += c.passed ? 1 : 0;
    return n;
  }
  int failed() const { return static_cast<int>(checks.size()) - passed(); }
};

struct VerifyOptions {
  std::uint64_t seed = 42;
  unsigned threads = 1;
};

namespace detail {

/// Per-check generator: the user seed mixed with a fixed tag, so adding a
/// check never shifts the streams of the others.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t tag) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(tag >> 32)};
    gen_.seed(seq);
  }
  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }

 private:
  std::mt19937_64 gen_;
};

/// Keeps the worst value seen and whether every comparison held.
struct Tally {
  bool ok = true;
  double worst = 0.0;
  int count = 0;

  void at_most(double value, double bound) {
    ++count;
    worst = std::max(worst, value);
    ok = ok && value <= bound;
  }
  void require(bool cond) {
    ++count;
    ok = ok && cond;
  }
};

inline std::string num(double v) { return format_real(v, 6); }

inline Check make_check(std::string name, bool passed, std::string detail) {
  return {std::move(name), passed, std::move(detail)};
}

inline double area_density_integral(const ScalarField& f, int panels = 64) {
  return integrate_rect(
      [&](double x, double y) {
        const Vec2 g = eval_grad(f, x, y);
        return std::sqrt(1 + g.x * g.x + g.y * g.y);
      },
      f.domain(), panels, 8);
}

inline std::vector<double> random_nodes(Rng& rng, int n, double amp) {
  std::vector<double> v(static_cast<std::size_t>(n + 1) * (n + 1));
  for (double& z : v) z = rng.uniform(-amp, amp);
  return v;
}

inline std::vector<double> separable_nodes(Rng& rng, int n, double amp) {
  std::vector<double> g(n + 1), h(n + 1), v;
  for (double& z : g) z = rng.uniform(-amp, amp);
  for (double& z : h) z = rng.uniform(-amp, amp);
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) v.push_back(g[i] + h[j]);
  return v;
}

inline ScalarField random_grid_field(Rng& rng, int nodes) {
  std::vector<double> v(static_cast<std::size_t>(nodes) * nodes);
  for (double& z : v) z = rng.uniform(-1.0, 1.0);
  return GridField(unit_square(), nodes, nodes, std::move(v)).to_field("random_grid");
}

inline std::vector<double> random_cuts(Rng& rng, double lo, double hi, int n) {
  std::vector<double> t{lo, hi};
  for (int i = 0; i < n; ++i) t.push_back(rng.uniform(lo, hi));
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

inline std::vector<std::pair<double, double>> random_defects(Rng& rng, int count) {
  std::vector<std::pair<double, double>> d;
  for (int i = 0; i < count; ++i) d.emplace_back(rng.uniform(0.001, 0.999), rng.uniform(-100.0, 100.0));
  std::sort(d.begin(), d.end());
  d.erase(std::unique(d.begin(), d.end(), [](auto& p, auto& q) { return p.first == q.first; }), d.end());
  return d;
}

// Defects on dyadic points, which every fine partition visits.
inline std::vector<std::pair<double, double>> dyadic_defects(Rng& rng) {
  std::vector<std::pair<double, double>> d;
  for (int i = 1; i < 16; i += rng.integer(1, 3)) d.emplace_back(i / 16.0, rng.uniform(-100.0, 100.0));
  return d;
}

/// Unordered pairs of catalog fields defined on the same rectangle.
inline std::vector<std::pair<ScalarField, ScalarField>> catalog_pairs() {
  std::vector<ScalarField> fs;
  for (const std::string& d : catalog_descriptors()) fs.push_back(make_field(d));
  std::vector<std::pair<ScalarField, ScalarField>> out;
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (std::size_t j = i + 1; j < fs.size(); ++j)
      if (fs[i].domain() == fs[j].domain()) out.emplace_back(fs[i], fs[j]);
  return out;
}

/// Worst relative gap between the closed form and the vertex oracle.
inline double worst_lantern_oracle_error(std::int64_t mmax, std::int64_t nmax, std::int64_t step = 1) {
  double worst = 0.0;
  for (std::int64_t m = 1; m <= mmax; m += step)
    for (std::int64_t n = 3; n <= nmax; n += step) {
      const double a = lantern_area({m, n});
      worst = std::max(worst, std::abs(lantern_vertex_oracle({m, n}) - a) / a);
    }
  return worst;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// property suites

inline SuiteReport fields_suite(const VerifyOptions& opt) {
  using namespace detail;
  SuiteReport r{"fields", {}};
  {
    Rng rng(opt.seed, 101);
    Tally t;
    for (int trial = 0; trial < 50; ++trial) {
      const double a = rng.uniform(-2, 2), c = rng.uniform(-2, 2);
      const Rect dom(a, a + rng.uniform(0.1, 3), c, c + rng.uniform(0.1, 3));
      const double al = rng.uniform(-5, 5), be = rng.uniform(-5, 5), ga = rng.uniform(-5, 5);
      auto plane = [&](double x, double y) { return al * x + be * y + ga; };
      const GridField g = GridField::sample(dom, rng.integer(2, 12), rng.integer(2, 12), plane);
      for (int i = 0; i < 200; ++i) {
        const double x = rng.uniform(dom.a, dom.b), y = rng.uniform(dom.c, dom.d);
        t.at_most(std::abs(g(x, y) - plane(x, y)), 1e-12);
      }
    }
    r.checks.push_back(make_check("grid_reproduces_affine", t.ok, "max err " + num(t.worst)));
  }
  {
    Tally t;
    auto check = [&](auto&& g, double exact) {
      double prev = std::abs(integrate_line(g, 0.0, 1.0, 1, 2) - exact);
      for (int p = 2; p <= 32; p *= 2) {
        const double err = std::abs(integrate_line(g, 0.0, 1.0, p, 2) - exact);
        t.require(err <= 0.5 * prev);
        prev = err;
      }
    };
    check([](double x) { return std::sqrt(1 + 4 * x * x); }, std::sqrt(5.0) / 2 + std::asinh(2.0) / 4);
    check([](double x) { return x * x * x * x; }, 0.2);
    auto para = [](double x, double y) { return std::sqrt(1 + 4 * x * x + 4 * y * y); };
    const double ref = integrate_rect(para, unit_square(), 128, 8);
    double prev = std::abs(integrate_rect(para, unit_square(), 1, 2) - ref);
    for (int p = 2; p <= 16; p *= 2) {
      const double err = std::abs(integrate_rect(para, unit_square(), p, 2) - ref);
      t.require(err <= 0.5 * prev);
      prev = err;
    }
    r.checks.push_back(make_check("quadrature_error_halves", t.ok, std::to_string(t.count) + " refinements"));
  }
  {
    Rng rng(opt.seed, 102);
    Tally t;
    for (int i = 0; i < 10000; ++i) {
      const double x = rng.uniform();
      t.at_most(std::abs(cantor_exact(x) + cantor_exact(1 - x) - 1), 1e-12);
      const double y = rng.uniform();
      t.require(x > y ? cantor_exact(y) <= cantor_exact(x) : cantor_exact(x) <= cantor_exact(y));
    }
    t.require(cantor_exact(0) == 0 && cantor_exact(1) == 1);
    r.checks.push_back(make_check("cantor_monotone_symmetric", t.ok, "max symmetry defect " + num(t.worst)));
  }
  {
    Rng rng(opt.seed, 103);
    Tally t;
    const double h = kDefaultFdStep;
    for (const char* desc : {"const(1)", "plane(1,2,0)", "paraboloid", "cylinder_sq", "saddle"}) {
      const ScalarField f = make_field(desc);
      for (int i = 0; i < 1000; ++i) {
        const double x = rng.uniform(), y = rng.uniform();
        const Vec2 d = fd_grad(f, x, y, h) - f.grad(x, y);
        t.at_most(std::max(std::abs(d.x), std::abs(d.y)), 10 * h * h);
      }
    }
    r.checks.push_back(make_check("fd_matches_analytic_gradient", t.ok, "max err " + num(t.worst)));
  }
  return r;
}

inline SuiteReport quasilinear_suite(const VerifyOptions& opt) {
  using namespace detail;
  SuiteReport r{"quasilinear", {}};
  {
    Rng rng(opt.seed, 201);
    Tally t;
    for (int i = 0; i < 200; ++i) {
      const Triangle2D tri{{rng.uniform(), rng.uniform()}, {rng.uniform(), rng.uniform()}, {rng.uniform(), rng.uniform()}};
      const double a = rng.uniform(-3, 3), b = rng.uniform(-3, 3), c = rng.uniform(-3, 3);
      auto lift = [&](Vec2 p) { return Vec3{p.x, p.y, a * p.x + b * p.y + c}; };
      const Vec3 p = lift(tri.p1), q = lift(tri.p2), s = lift(tri.p3);
      t.at_most(std::abs(lifted_tri_area(tri, a, b) - 0.5 * norm(cross(q - p, s - p))), 1e-12);
    }
    r.checks.push_back(make_check("lifted_area_cross_product", t.ok, "max err " + num(t.worst)));
  }
  {
    Rng rng(opt.seed, 202);
    Tally t;
    for (int i = 0; i < 100; ++i) {
      const int n = rng.integer(1, 6);
      const QuasiLinearFn pi = QuasiLinearFn::on_grid(unit_square(), n, n, random_nodes(rng, n, rng.uniform(0, 3)));
      t.require(elementary_area(pi) >= 1.0 - 1e-15);
    }
    r.checks.push_back(make_check("elementary_area_at_least_domain", t.ok, std::to_string(t.count) + " meshes"));
  }
  {
    Rng rng(opt.seed, 203);
    Tally t;
    for (int i = 0; i < 50; ++i) {
      const int n = rng.integer(1, 8);
      const auto v = separable_nodes(rng, n, 2.0);
      t.at_most(std::abs(elementary_area(QuasiLinearFn::on_grid(unit_square(), n, n, v, Diagonal::LowerLeftToUpperRight)) -
                         elementary_area(QuasiLinearFn::on_grid(unit_square(), n, n, v, Diagonal::UpperLeftToLowerRight))),
                1e-10);
    }
    r.checks.push_back(make_check("decomposition_independence", t.ok, "max diff " + num(t.worst)));
  }
  {
    Tally t;
    for (const char* desc : {"paraboloid", "cylinder_sq", "saddle"}) {
      const ScalarField f = make_field(desc);
      const double oracle = area_density_integral(f, 128);
      double prev = HUGE_VAL;
      for (int k = 0; k <= 8; ++k) {
        const double err = std::abs(elementary_area(interpolate_quasilinear(f, k)) - oracle);
        t.require(err < 0.3 * prev + 1e-12);
        prev = err;
      }
      t.at_most(prev, 1e-5);
    }
    r.checks.push_back(make_check("interpolation_ladder_converges", t.ok, "final err " + num(t.worst)));
  }
  {
    Tally t;
    const ScalarField plane = make_field("plane(1,2,0)");
    for (int k = 0; k <= 8; ++k) t.at_most(std::abs(elementary_area(interpolate_quasilinear(plane, k)) - std::sqrt(6.0)), 1e-12);
    r.checks.push_back(make_check("interpolation_reproduces_plane", t.ok, "max err " + num(t.worst)));
  }
  return r;
}

inline SuiteReport geocze_suite(const VerifyOptions& opt) {
  using namespace detail;
  SuiteReport r{"geocze", {}};
  {
    Rng rng(opt.seed, 301);
    Tally t;
    const ScalarField plane = make_field("plane(1,2,0)");
    for (int i = 0; i < 50; ++i) {
      const Subdivision d(random_cuts(rng, 0, 1, rng.integer(1, 10)), random_cuts(rng, 0, 1, rng.integer(1, 10)));
      t.at_most(std::abs(geocze_sum(plane, d, {}, opt.threads) - std::sqrt(6.0)), 1e-12);
    }
    r.checks.push_back(make_check("plane_exact_any_subdivision", t.ok, "max err " + num(t.worst)));
  }
  {
    Rng rng(opt.seed, 302);
    Tally t;
    for (const std::string& desc : catalog_descriptors()) {
      const ScalarField f = make_field(desc);
      const Rect& d = f.domain();
      for (int i = 0; i < 20; ++i) {
        const auto xs = random_cuts(rng, d.a, d.b, 1), ys = random_cuts(rng, d.c, d.d, 1);
        const Rect rr(xs[0], xs[1], ys[0], ys[1]);
        t.require(gamma(f, rr) >= rr.area());
      }
    }
    r.checks.push_back(make_check("gamma_at_least_rect_area", t.ok, std::to_string(t.count) + " rectangles"));
  }
  {
    Tally t;
    LadderOptions lo;
    lo.max_level = 6;
    lo.threads = opt.threads;
    for (const std::string& desc : catalog_descriptors()) {
      const GeoczeLadder l = geocze_area(make_field(desc), lo);
      for (std::size_t k = 1; k < l.levels.size(); ++k) t.at_most(l.levels[k - 1].G - l.levels[k].G, 1e-9);
    }
    r.checks.push_back(make_check("refinement_monotone", t.ok, "max decrease " + num(t.worst)));
  }
  {
    Tally t;
    LadderOptions lo;
    lo.threads = opt.threads;
    for (const char* desc : {"const(1)", "plane(1,2,0)", "paraboloid", "cylinder_sq", "saddle"}) {
      const ScalarField f = make_field(desc);
      const double oracle = area_density_integral(f, 128);
      for (const LadderLevel& lv : geocze_area(f, lo).levels) t.at_most(lv.G - oracle, 10 * 1e-10);
    }
    r.checks.push_back(make_check("smooth_sums_below_area_integral", t.ok, "max excess " + num(t.worst)));
  }
  {
    Rng rng(opt.seed, 303);
    Tally t;
    for (int i = 0; i < 5; ++i) {
      const QuasiLinearFn pi = QuasiLinearFn::on_grid(unit_square(), 8, 8, separable_nodes(rng, 8, 1.0));
      LadderOptions lo;
      lo.max_level = 5;
      lo.threads = opt.threads;
      const GeoczeLadder l = geocze_area(pi.to_field(), lo);
      t.require(l.converged);
      t.at_most(std::abs(l.estimate - elementary_area(pi)), 1e-6);
    }
    r.checks.push_back(make_check("quasilinear_consistency", t.ok, "max diff " + num(t.worst)));
  }
  return r;
}

inline SuiteReport tonelli_suite(const VerifyOptions& opt) {
  using namespace detail;
  SuiteReport r{"tonelli", {}};
  {
    Rng rng(opt.seed, 401);
    Tally t;
    for (int i = 0; i < 30; ++i) {
      const double w = rng.uniform(1, 30), s = rng.uniform(0.1, 5);
      const auto lv = variation_by_level([&](double x) { return std::sin(w * x); }, 0, 1, 14);
      for (std::size_t k = 1; k < lv.size(); ++k) t.require(lv[k] >= lv[k - 1]);
      for (double v : variation_by_level([&](double x) { return std::exp(s * x); }, 0, 1, 10))
        t.at_most(std::abs(v - (std::exp(s) - 1)), 1e-12);
    }
    r.checks.push_back(make_check("variation_monotone_in_level", t.ok, "telescoping err " + num(t.worst)));
  }
  {
    Tally t;
    VariationOptions vo;
    vo.threads = opt.threads;
    const std::pair<const char*, double> cases[] = {{"paraboloid", 2.0},          {"cylinder_sq", 1.0},
                                                    {"plane(1,2,0)", 3.0},        {"cantor_sheet(exact)", 2.0},
                                                    {"steiner_f2(exact)", 2.0},   {"step_x(0.5)", 1.0}};
    for (const auto& [desc, closed] : cases) t.at_most(std::abs(v_T(make_field(desc), vo).V_T - closed), 1e-10);
    r.checks.push_back(make_check("monotone_sections_telescope", t.ok, "max err " + num(t.worst)));
  }
  {
    Tally t;
    VariationOptions vo;
    vo.threads = opt.threads;
    std::string flagged;
    for (const std::string& desc : catalog_descriptors()) {
      const bool div = v_T(make_field(desc), vo).divergent;
      t.require(div == (desc == "bvt_counterexample"));
      if (div) flagged += (flagged.empty() ? "" : " ") + desc;
    }
    r.checks.push_back(make_check("bvt_divergence_flag", t.ok, "flagged: " + flagged));
  }
  {
    Rng rng(opt.seed, 402);
    Tally t;
    for (const std::string& desc : catalog_descriptors()) {
      if (desc == "bvt_counterexample") continue;
      const ScalarField f = make_field(desc);
      const Rect& d = f.domain();
      for (int i = 0; i < 3; ++i) {
        const double s = rng.uniform(d.c + 0.1 * d.height(), d.d - 0.1 * d.height());
        const double whole = w_x(f, d), parts = w_x(f, Rect(d.a, d.b, d.c, s)) + w_x(f, Rect(d.a, d.b, s, d.d));
        // the saddle's V_x(y) = (b-a)|y - 1/2| has a kink inside a Gauss panel
        t.at_most(std::abs(whole - parts), desc == "saddle" ? 1e-4 : 1e-8);
      }
    }
    r.checks.push_back(make_check("w_x_additive", t.ok, "max err " + num(t.worst)));
  }
  {
    Tally t;
    for (const std::string& desc : catalog_descriptors()) {
      if (desc == "bvt_counterexample") continue;
      const ScalarField f = make_field(desc);
      const SingularMass s = singular_mass_x(f, f.domain());
      t.require(s.raw >= -1e-6);
      if (f.regularity() == Regularity::C1) t.at_most(std::abs(s.raw), 1e-3);
    }
    r.checks.push_back(make_check("singular_mass_nonnegative", t.ok, "max C1 mass " + num(t.worst)));
  }
  {
    Rng rng(opt.seed, 403);
    Tally t;
    for (const char* base : {"x", "parabola", "step(0.5)", "cantor(exact)", "cantor(8)"}) {
      const Fn1D g = make_base_1d(base);
      const double clean = generalized_variation_1d(DefectedFn1D(g));
      for (int i = 0; i < 20; ++i) {
        t.require(generalized_variation_1d(DefectedFn1D(g, random_defects(rng, rng.integer(1, 10)))) == clean);
        t.require(generalized_variation_1d(DefectedFn1D(g, dyadic_defects(rng))) == clean);
      }
    }
    r.checks.push_back(make_check("defect_invariance", t.ok, std::to_string(t.count) + " defect lists"));
  }
  return r;
}

inline SuiteReport mollify_suite(const VerifyOptions& opt) {
  using namespace detail;
  SuiteReport r{"mollify", {}};
  {
    Rng rng(opt.seed, 501);
    Tally t;
    for (int i = 0; i < 10; ++i) {
      const ScalarField f = random_grid_field(rng, 9);
      const double base = l1_norm(f);
      for (double h : {0.1, 0.05}) t.at_most(l1_norm(integral_mean(f, h), {8, 8}) - base, 1e-6);
    }
    r.checks.push_back(make_check("l1_contraction", t.ok, "max excess " + num(t.worst)));
  }
  {
    Tally t;
    for (const char* desc : {"paraboloid", "saddle", "cantor(exact)", "steiner_f2(exact)"}) {
      const ScalarField f = make_field(desc);
      double prev = HUGE_VAL;
      for (double h : {0.1, 0.05, 0.025, 0.0125}) {
        const double d = sup_distance(integral_mean(f, h), f, 128, centered_subsquare(f.domain()));
        t.require(d <= prev + 1e-12);
        prev = d;
      }
    }
    r.checks.push_back(make_check("uniform_convergence", t.ok, std::to_string(t.count) + " radii"));
  }
  {
    Tally t;
    MollifyOptions mo;
    mo.mode = MollifyMode::Grid;
    for (const char* desc : {"plane(1,2,0)", "paraboloid", "cantor(exact)"}) {
      const ScalarField f = make_field(desc);
      LadderOptions sub;
      sub.region = centered_subsquare(f.domain());
      sub.threads = opt.threads;
      t.at_most(geocze_area(integral_mean(f, 0.05, mo), sub).estimate - geocze_area(f).estimate, 1e-3);
    }
    r.checks.push_back(make_check("area_not_increased", t.ok, "max excess " + num(t.worst)));
  }
  return r;
}

inline SuiteReport lantern_suite(const VerifyOptions&) {
  using namespace detail;
  SuiteReport r{"lantern", {}};
  {
    const double worst = worst_lantern_oracle_error(64, 64, 4);
    r.checks.push_back(make_check("oracle_matches_closed_form", worst <= 1e-12, "max rel err " + num(worst)));
  }
  {
    Tally t;
    for (std::int64_t m : {1, 2, 5, 64, 1000, 100000})
      for (std::int64_t n = 3; n <= 2048; n = n * 3 / 2 + 1)
        t.require(lantern_area({m, n}) >=
                  2 * std::numbers::pi * (n / std::numbers::pi) * std::sin(std::numbers::pi / n) * (1 - 1e-15));
    r.checks.push_back(make_check("prism_lower_bound", t.ok, std::to_string(t.count) + " lanterns"));
  }
  {
    Tally t;
    for (std::int64_t n : {3, 8, 20, 64}) {
      const auto start = static_cast<std::int64_t>(std::floor(double(n) * n / (std::numbers::pi * std::numbers::pi))) + 1;
      for (std::int64_t m = start; m < start + 200; ++m) t.require(lantern_area({m, n}) < lantern_area({m + 1, n}));
    }
    r.checks.push_back(make_check("increasing_in_slices", t.ok, std::to_string(t.count) + " steps"));
  }
  {
    Tally t;
    for (std::int64_t m : {1, 4, 64})
      for (std::int64_t n = 3; n < 200; ++n) t.require(lantern_triangle_area({m, n + 1}) < lantern_triangle_area({m, n}));
    r.checks.push_back(make_check("triangle_decreasing_in_sectors", t.ok, std::to_string(t.count) + " steps"));
  }
  return r;
}

inline SuiteReport steiner_suite(const VerifyOptions& opt) {
  using namespace detail;
  SuiteReport r{"steiner", {}};
  {
    Rng rng(opt.seed, 701);
    Tally t;
    for (int i = 0; i < 100; ++i) {
      std::vector<Vec3> vs(rng.integer(1, 5));
      for (Vec3& v : vs) v = {rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
      t.require(vector_norm_superadditivity(vs).holds);
    }
    r.checks.push_back(make_check("vector_norm_lemma", t.ok, std::to_string(t.count) + " lists"));
  }
  {
    Rng rng(opt.seed, 702);
    Tally t;
    double worst_equal = 0.0;
    for (int i = 0; i < 100; ++i) {
      const QuasiLinearFn p = QuasiLinearFn::on_grid(unit_square(), 4, 4, random_nodes(rng, 4, 2.0));
      const QuasiLinearFn q = QuasiLinearFn::on_grid(unit_square(), 4, 4, random_nodes(rng, 4, 2.0));
      t.at_most(-steiner_gap_quasilinear(p, q), 1e-12);
      std::vector<double> shifted;
      const double c = rng.uniform(-3, 3);
      for (int j = 0; j <= 4; ++j)
        for (int k = 0; k <= 4; ++k) shifted.push_back(p(k / 4.0, j / 4.0) + c);
      worst_equal = std::max(worst_equal, std::abs(steiner_gap_quasilinear(p, QuasiLinearFn::on_grid(unit_square(), 4, 4, shifted))));
    }
    t.at_most(worst_equal, 1e-12);
    r.checks.push_back(make_check("quasilinear_gap_nonnegative", t.ok, "equality-case residual " + num(worst_equal)));
  }
  {
    Tally t;
    for (const auto& [f1, f2] : catalog_pairs())
      for (int k : {0, 3, 6})
        t.at_most(-steiner_gap_subdivision(f1, f2, Subdivision::dyadic(f1.domain(), k), {ladder_panels(k), 8}, opt.threads),
                  1e-9);
    r.checks.push_back(make_check("subdivision_gap_nonnegative", t.ok, std::to_string(t.count) + " sums"));
  }
  return r;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"fields", "quasilinear", "geocze", "tonelli", "mollify", "lantern", "steiner"};
  return names;
}

inline SuiteReport run_suite(const std::string& name, const VerifyOptions& opt) {
  if (name == "fields") return fields_suite(opt);
  if (name == "quasilinear") return quasilinear_suite(opt);
  if (name == "geocze") return geocze_suite(opt);
  if (name == "tonelli") return tonelli_suite(opt);
  if (name == "mollify") return mollify_suite(opt);
  if (name == "lantern") return lantern_suite(opt);
  if (name == "steiner") return steiner_suite(opt);
  throw InvalidArgument("unknown suite '" + name + "'");
}

// ---------------------------------------------------------------------------
// acceptance gate

struct Criterion {
  int id;
  std::string title;
  std::function<Check(const VerifyOptions&)> run;
};

namespace detail {

inline Check lantern_oracle_grid(const VerifyOptions&) {
  const auto t0 = std::chrono::steady_clock::now();
  const double worst = worst_lantern_oracle_error(64, 64);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return make_check("", worst <= 1e-12 && secs < 10.0, "max rel err " + num(worst) + ", " + num(secs) + " s");
}

inline Check lantern_diagonal(const VerifyOptions&) {
  const double a = lantern_area({512, 512});
  return make_check("", std::abs(a - 2 * std::numbers::pi) <= 1e-3, "P(512,512) = " + format_real(a, 10));
}

inline Check lantern_parabolic(const VerifyOptions&) {
  const LanternLimit l = lantern_limit({LanternPathKind::Parabolic, 7, 1.0});
  const double target = 2 * std::numbers::pi * std::numbers::sqrt2;
  const double v = l.limit.value_or(HUGE_VAL);
  return make_check("", std::abs(v - target) <= 1e-2,
                    "n = " + std::to_string(l.sequence.back().n) + ", m = " + std::to_string(l.sequence.back().m) +
                        ": area " + format_real(v, 10) + " vs 2 pi sqrt 2 = " + format_real(target, 10));
}

inline Check lantern_divergence(const VerifyOptions&) {
  const double a = lantern_area({1000000, 8});
  const LanternLimit l = lantern_limit({LanternPathKind::MFirst, 3});
  return make_check("", a > 1e3 && l.divergent,
                    "P(1e6,8) = " + num(a) + ", path " + (l.divergent ? "divergent" : "finite"));
}

inline Check plane_exactness(const VerifyOptions& opt) {
  Tally t;
  const ScalarField plane = make_field("plane(1,2,0)");
  for (int k = 0; k <= 8; ++k) {
    t.at_most(std::abs(geocze_sum(plane, Subdivision::dyadic(unit_square(), k), {ladder_panels(k), 8}, opt.threads) -
                       std::sqrt(6.0)),
              1e-12);
    t.at_most(std::abs(elementary_area(interpolate_quasilinear(plane, k)) - std::sqrt(6.0)), 1e-12);
  }
  return make_check("", t.ok, "max err " + num(t.worst));
}

inline Check smooth_area(const VerifyOptions& opt) {
  const ScalarField f = make_field("paraboloid");
  const double oracle = area_density_integral(f, 128);
  LadderOptions lo;
  lo.threads = opt.threads;
  const double g = geocze_area(f, lo).estimate;
  const double q = elementary_area(interpolate_quasilinear(f, 7));
  const bool ok = std::abs(g - oracle) <= 1e-3 && std::abs(q - oracle) <= 1e-3 && std::abs(g - q) <= 2e-3;
  return make_check("", ok, "oracle " + format_real(oracle, 10) + ", Geocze " + format_real(g, 10) + ", quasi-linear " +
                                format_real(q, 10));
}

inline Check cylinder_reduction(const VerifyOptions& opt) {
  LadderOptions lo;
  lo.threads = opt.threads;
  const double g = geocze_area(make_field("cylinder_sq"), lo).estimate;
  const double exact = std::sqrt(5.0) / 2 + std::asinh(2.0) / 4;
  return make_check("", std::abs(g - exact) <= 1e-4, "estimate " + format_real(g, 10) + " vs " + format_real(exact, 10));
}

inline Check refinement_monotonicity(const VerifyOptions& opt) {
  Tally t;
  LadderOptions lo;
  lo.max_level = 8;
  lo.threads = opt.threads;
  for (const std::string& desc : catalog_descriptors()) {
    const GeoczeLadder l = geocze_area(make_field(desc), lo);
    for (std::size_t k = 1; k < l.levels.size(); ++k) t.at_most(l.levels[k - 1].G - l.levels[k].G, 1e-9);
  }
  return make_check("", t.ok, std::to_string(t.count) + " steps, max decrease " + num(t.worst));
}

// Fields whose sectional variation diverges have infinite area and an
// infinite lower bound; a finite ladder cannot compare them.
inline Check tonelli_inequality(const VerifyOptions& opt) {
  Tally t;
  std::string skipped;
  LadderOptions lo;
  lo.threads = opt.threads;
  VariationOptions vo;
  vo.threads = opt.threads;
  for (const std::string& desc : catalog_descriptors()) {
    const ScalarField f = make_field(desc);
    const GeoczeLadder l = geocze_area(f, lo);
    if (!l.converged && v_T(f, vo).divergent) {
      skipped += " " + desc;
      continue;
    }
    t.at_most(tonelli_lower_bound(f) - l.estimate, 1e-3);
  }
  return make_check("", t.ok, "max shortfall " + num(t.worst) + (skipped.empty() ? "" : "; skipped (not BVT):" + skipped));
}

inline Check act_equality(const VerifyOptions& opt) {
  Tally t;
  std::ostringstream det;
  LadderOptions lo;
  lo.threads = opt.threads;
  for (const char* desc : {"plane(1,2,0)", "paraboloid", "cylinder_sq"}) {
    const double v = act_residual(make_field(desc), lo).value;
    t.at_most(std::abs(v), 1e-3);
    det << desc << ' ' << num(v) << ", ";
  }
  lo.max_level = 10;
  const ActResidual c = act_residual(make_field("steiner_f2(exact)"), lo);
  t.require(std::abs(c.value - 2.0) <= 0.1);
  det << "steiner_f2 " << num(c.value) << " (Geocze " << num(c.geocze_estimate) << " - lower bound "
      << num(c.lower_bound) << ")";
  return make_check("", t.ok, det.str());
}

inline Check mollifier_contraction(const VerifyOptions& opt) {
  Rng rng(opt.seed, 1101);
  Tally t;
  for (int i = 0; i < 50; ++i) {
    const ScalarField f = random_grid_field(rng, 9);
    const double base = l1_norm(f);
    for (double h : {0.1, 0.05}) t.at_most(l1_norm(integral_mean(f, h), {8, 8}) - base, 1e-6);
  }
  return make_check("", t.ok, std::to_string(t.count) + " cases, max excess " + num(t.worst));
}

inline Check mollifier_area(const VerifyOptions& opt) {
  Tally t;
  MollifyOptions mo;
  mo.mode = MollifyMode::Grid;
  for (const std::string& desc : catalog_descriptors()) {
    const ScalarField f = make_field(desc);
    LadderOptions sub;
    sub.region = centered_subsquare(f.domain());
    sub.threads = opt.threads;
    LadderOptions full;
    full.threads = opt.threads;
    t.at_most(geocze_area(integral_mean(f, 0.05, mo), sub).estimate - geocze_area(f, full).estimate, 1e-3);
  }
  return make_check("", t.ok, "f_h tabulated on a 129^2 grid; max excess " + num(t.worst));
}

inline Check steiner_inequality(const VerifyOptions& opt) {
  Tally ql, sub, pair;
  Rng rng(opt.seed, 1301);
  for (int i = 0; i < 100; ++i) {
    const QuasiLinearFn p = QuasiLinearFn::on_grid(unit_square(), 4, 4, random_nodes(rng, 4, 2.0));
    const QuasiLinearFn q = QuasiLinearFn::on_grid(unit_square(), 4, 4, random_nodes(rng, 4, 2.0));
    ql.at_most(-steiner_gap_quasilinear(p, q), 1e-12);
  }
  for (const auto& [f1, f2] : catalog_pairs())
    for (int k = 0; k <= 8; ++k)
      sub.at_most(-steiner_gap_subdivision(f1, f2, Subdivision::dyadic(f1.domain(), k), {ladder_panels(k), 8}, opt.threads),
                  1e-9);
  const ScalarField f1 = make_field("steiner_f1(exact)"), f2 = make_field("steiner_f2(exact)");
  const Subdivision d10 = Subdivision::dyadic(f1.domain(), 10);
  const QuadratureSpec q10{ladder_panels(10), 8};
  const double a1 = geocze_sum(f1, d10, q10, opt.threads), a2 = geocze_sum(f2, d10, q10, opt.threads);
  const double am = geocze_sum(midpoint(f1, f2), d10, q10, opt.threads);
  for (double a : {a1, a2, am}) pair.at_most(std::abs(a - 6.0), 0.1);
  std::ostringstream det;
  det << "quasi-linear max -gap " << num(ql.worst) << "; subdivision max -gap " << num(sub.worst) << " over " << sub.count
      << " sums; level 10 areas " << num(a1) << ", " << num(a2) << ", midpoint " << num(am);
  return make_check("", ql.ok && sub.ok && pair.ok, det.str());
}

inline Check generalized_variation(const VerifyOptions& opt) {
  Rng rng(opt.seed, 1401);
  Tally inv, ac, sing;
  for (const char* base : {"x", "parabola", "step(0.5)", "cantor(exact)", "cantor(8)"}) {
    const Fn1D g = make_base_1d(base);
    const double clean = generalized_variation_1d(DefectedFn1D(g));
    for (int i = 0; i < 20; ++i) {
      inv.require(generalized_variation_1d(DefectedFn1D(g, random_defects(rng, rng.integer(1, 10)))) == clean);
      inv.require(generalized_variation_1d(DefectedFn1D(g, dyadic_defects(rng))) == clean);
    }
  }
  for (const char* base : {"x", "parabola"})
    ac.at_most(std::abs(essential_derivative_gap(DefectedFn1D(make_base_1d(base), random_defects(rng, 5))).gap), 1e-4);
  const double cg = essential_derivative_gap(DefectedFn1D(make_base_1d("cantor(exact)")), {64, 8}, 1e-9).gap;
  sing.at_most(std::abs(cg - 1.0), 0.05);
  return make_check("", inv.ok && ac.ok && sing.ok,
                    std::to_string(inv.count) + " defect lists; AC gap " + num(ac.worst) + "; Cantor gap " + num(cg));
}

inline Check decomposition_independence(const VerifyOptions& opt) {
  Rng rng(opt.seed, 1501);
  Tally t;
  for (int i = 0; i < 50; ++i) {
    const int n = rng.integer(1, 8);
    const auto v = separable_nodes(rng, n, 2.0);
    t.at_most(std::abs(elementary_area(QuasiLinearFn::on_grid(unit_square(), n, n, v, Diagonal::LowerLeftToUpperRight)) -
                       elementary_area(QuasiLinearFn::on_grid(unit_square(), n, n, v, Diagonal::UpperLeftToLowerRight))),
              1e-10);
  }
  return make_check("", t.ok, "max diff " + num(t.worst));
}

}  // namespace detail

inline const std::vector<Criterion>& acceptance_criteria() {
  static const std::vector<Criterion> all{
      {1, "lantern closed form equals vertex oracle", detail::lantern_oracle_grid},
      {2, "lantern diagonal limit 2 pi", detail::lantern_diagonal},
      {3, "lantern parabolic limit 2 pi sqrt(c^2 + 1)", detail::lantern_parabolic},
      {4, "lantern divergence along m first", detail::lantern_divergence},
      {5, "plane exactness", detail::plane_exactness},
      {6, "smooth field area", detail::smooth_area},
      {7, "cylinder reduction to arc length", detail::cylinder_reduction},
      {8, "refinement monotonicity", detail::refinement_monotonicity},
      {9, "Tonelli inequality", detail::tonelli_inequality},
      {10, "ACT equality and Cantor singular mass", detail::act_equality},
      {11, "mollifier L1 contraction", detail::mollifier_contraction},
      {12, "mollifier area monotonicity", detail::mollifier_area},
      {13, "Steiner inequality", detail::steiner_inequality},
      {14, "generalized variation", detail::generalized_variation},
      {15, "decomposition independence", detail::decomposition_independence},
  };
  return all;
}

/// Runs one criterion, or all of them when id == 0.
inline SuiteReport run_acceptance(const VerifyOptions& opt, int id = 0) {
  SuiteReport r{"acceptance", {}};
  bool found = false;
  for (const Criterion& c : acceptance_criteria()) {
    if (id != 0 && c.id != id) continue;
    found = true;
    Check ch = c.run(opt);
    ch.name = std::to_string(c.id) + " " + c.title;
    r.checks.push_back(std::move(ch));
  }
  if (!found) throw InvalidArgument("no acceptance criterion " + std::to_string(id));
  return r;
}

}  // namespace surfarea::verify
