/// @file tonelli.hpp
/// @brief sectional variations in the sense of Tonelli, the classical area
///        lower bound, rectangle functions W_x/W_y and their singular parts,
///        condition-C checks and the one-variable generalized variation

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "fields.hpp"
#include "format.hpp"
#include "geocze.hpp"
#include "geometry.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"

namespace surfarea {

using Fn1D = std::function<double(double)>;

inline constexpr int kMaxVariationLevel = 24;

/// Dyadic partition sums of |g(t_{j+1}) - g(t_j)| over [a, b] for levels
/// 0..levels (2^k intervals at level k), as a running maximum so the
/// sequence is nondecreasing.  Samples g once at the finest level.
template <class G>
std::vector<double> variation_by_level(G&& g, double a, double b, int levels) {
  if (levels < 0 || levels > kMaxVariationLevel) throw InvalidArgument("variation levels must lie in 0..24");
  if (!(a < b)) throw InvalidArgument("variation interval needs a < b");
  const std::size_t n = std::size_t{1} << levels;
  std::vector<double> s(n + 1);
  for (std::size_t i = 0; i <= n; ++i) s[i] = g(i == n ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(n));
  std::vector<double> out(levels + 1);
  double best = 0.0;
  for (int k = 0; k <= levels; ++k) {
    const std::size_t stride = n >> k;
    double v = 0.0;
    for (std::size_t i = 0; i + stride <= n; i += stride) v += std::abs(s[i + stride] - s[i]);
    best = std::max(best, v);
    out[k] = best;
  }
  return out;
}

/// Total variation of g over [a, b] along dyadic partitions of up to 2^levels
/// intervals.  Converges to the classical total variation for regulated g.
template <class G>
double total_variation_1d(G&& g, double a, double b, int levels) {
  return variation_by_level(std::forward<G>(g), a, b, levels).back();
}

/// Variation of the horizontal section x -> f(x, y).
inline double v_x(const ScalarField& f, double y, int levels) {
  const Domain& d = f.domain();
  if (y < d.c || y > d.d) throw DomainError("v_x: line y = " + std::to_string(y) + " outside the domain");
  return total_variation_1d([&](double x) { return f(x, y); }, d.a, d.b, levels);
}

/// Variation of the vertical section y -> f(x, y).
inline double v_y(const ScalarField& f, double x, int levels) {
  const Domain& d = f.domain();
  if (x < d.a || x > d.b) throw DomainError("v_y: line x = " + std::to_string(x) + " outside the domain");
  return total_variation_1d([&](double y) { return f(x, y); }, d.c, d.d, levels);
}

struct SectionSample {
  double coord = 0.0;      // y for horizontal sections, x for vertical ones
  double variation = 0.0;  // at the finest level
};

/// V_T(f) = int V_x(f;y) dy + int V_y(f;x) dx, with per-level integrals for
/// the divergence check.
struct VariationReport {
  double V_x_integral = 0.0;
  double V_y_integral = 0.0;
  double V_T = 0.0;
  std::vector<double> V_x_by_level;
  std::vector<double> V_y_by_level;
  std::vector<SectionSample> x_sections;
  std::vector<SectionSample> y_sections;
  bool divergent = false;
};

struct VariationOptions {
  int levels = 12;
  QuadratureSpec quad{8, 8};
  unsigned threads = 1;
};

/// True when some run of three consecutive level-to-level ratios past
/// level 6 exceeds 1.2.  Finite sectional variations settle geometrically
/// under dyadic refinement; unbounded ones keep growing.
inline bool variation_diverges(const std::vector<double>& by_level) {
  int run = 0;
  for (std::size_t k = 7; k < by_level.size(); ++k) {
    const double prev = by_level[k - 1];
    if (prev > 0.0 && by_level[k] > 1.2 * prev) {
      if (++run >= 3) return true;
    } else {
      run = 0;
    }
  }
  return false;
}

namespace detail {

// Per-level integral over [lo, hi] of the sectional variations, sampled at
// the composite Gauss nodes of the cross coordinate.
template <class Section>
std::vector<double> integrate_sections(Section&& section_levels, double lo, double hi, const VariationOptions& opt,
                                       std::vector<SectionSample>& samples) {
  const GaussRule& rule = gauss_rule(opt.quad.order);
  detail::check_spec(opt.quad.panels, opt.quad.order);
  const std::size_t nodes = static_cast<std::size_t>(opt.quad.panels) * opt.quad.order;
  const double w = (hi - lo) / opt.quad.panels;
  std::vector<double> coord(nodes), weight(nodes);
  for (int p = 0; p < opt.quad.panels; ++p)
    for (int i = 0; i < opt.quad.order; ++i) {
      const std::size_t idx = static_cast<std::size_t>(p) * opt.quad.order + i;
      coord[idx] = lo + (p + 0.5) * w + 0.5 * w * rule.nodes[i];
      weight[idx] = 0.5 * w * rule.weights[i];
    }
  std::vector<std::vector<double>> per_node(nodes);
  parallel_for(nodes, opt.threads, [&](std::size_t i) { per_node[i] = section_levels(coord[i]); });
  std::vector<double> out(opt.levels + 1, 0.0);
  samples.clear();
  for (std::size_t i = 0; i < nodes; ++i) {
    for (int k = 0; k <= opt.levels; ++k) out[k] += weight[i] * per_node[i][k];
    samples.push_back({coord[i], per_node[i].back()});
  }
  return out;
}

}  // namespace detail

/// Tonelli variation of f over its domain.
inline VariationReport v_T(const ScalarField& f, const VariationOptions& opt = {}) {
  const Domain& d = f.domain();
  VariationReport r;
  r.V_x_by_level = detail::integrate_sections(
      [&](double y) { return variation_by_level([&](double x) { return f(x, y); }, d.a, d.b, opt.levels); }, d.c, d.d,
      opt, r.x_sections);
  r.V_y_by_level = detail::integrate_sections(
      [&](double x) { return variation_by_level([&](double y) { return f(x, y); }, d.c, d.d, opt.levels); }, d.a, d.b,
      opt, r.y_sections);
  r.V_x_integral = r.V_x_by_level.back();
  r.V_y_integral = r.V_y_by_level.back();
  r.V_T = r.V_x_integral + r.V_y_integral;
  r.divergent = variation_diverges(r.V_x_by_level) || variation_diverges(r.V_y_by_level);
  return r;
}

/// Variation report CSV: `quantity,level,value`.
inline void write_variation_csv(std::ostream& out, const VariationReport& r) {
  out << "quantity,level,value\n";
  for (std::size_t k = 0; k < r.V_x_by_level.size(); ++k)
    out << "V_x_integral," << k << ',' << format_real(r.V_x_by_level[k]) << '\n';
  for (std::size_t k = 0; k < r.V_y_by_level.size(); ++k)
    out << "V_y_integral," << k << ',' << format_real(r.V_y_by_level[k]) << '\n';
  for (std::size_t k = 0; k < r.V_x_by_level.size(); ++k)
    out << "V_T," << k << ',' << format_real(r.V_x_by_level[k] + r.V_y_by_level[k]) << '\n';
}

/// int_R sqrt(1 + f_x^2 + f_y^2), gradients from eval_grad.  Never below |R|.
inline double tonelli_lower_bound(const ScalarField& f, QuadratureSpec q = {64, 8}, double fd_step = kDefaultFdStep,
                                  std::optional<Rect> region = {}) {
  const Rect r = region.value_or(f.domain());
  detail::require_inside(f, r, "tonelli_lower_bound");
  return integrate_rect(
      [&](double x, double y) {
        const Vec2 g = eval_grad(f, x, y, fd_step);
        return std::sqrt(1.0 + g.x * g.x + g.y * g.y);
      },
      r, q);
}

struct ActResidual {
  double geocze_estimate = 0.0;
  double lower_bound = 0.0;
  double value = 0.0;  // geocze_estimate - lower_bound
  bool ladder_converged = false;
};

/// Gap between the Geöcze area and the classical integral.  About zero for
/// fields absolutely continuous in the sense of Tonelli; otherwise roughly
/// the singular part of the variation.
inline ActResidual act_residual(const ScalarField& f, const LadderOptions& ladder = {}, QuadratureSpec q = {64, 8},
                                double fd_step = kDefaultFdStep) {
  const GeoczeLadder l = geocze_area(f, ladder);
  ActResidual out;
  out.geocze_estimate = l.estimate;
  out.lower_bound = tonelli_lower_bound(f, q, fd_step, ladder.region);
  out.value = out.geocze_estimate - out.lower_bound;
  out.ladder_converged = l.converged;
  return out;
}

/// W_x(f;R) = int_c^d V_x(f;y) dy with the sections restricted to [a,b].
inline double w_x(const ScalarField& f, const Rect& r, int levels = 12, QuadratureSpec q = {8, 8}) {
  detail::require_inside(f, r, "w_x");
  return integrate_line([&](double y) { return total_variation_1d([&](double x) { return f(x, y); }, r.a, r.b, levels); },
                        r.c, r.d, q);
}

/// W_y(f;R) = int_a^b V_y(f;x) dx with the sections restricted to [c,d].
inline double w_y(const ScalarField& f, const Rect& r, int levels = 12, QuadratureSpec q = {8, 8}) {
  detail::require_inside(f, r, "w_y");
  return integrate_line([&](double x) { return total_variation_1d([&](double y) { return f(x, y); }, r.c, r.d, levels); },
                        r.a, r.b, q);
}

struct SingularMass {
  double value = 0.0;     // raw clipped at 0 from below
  double raw = 0.0;       // w - ac_part
  double w = 0.0;         // rectangle function W
  double ac_part = 0.0;   // int_R |partial derivative|
};

namespace detail {

inline SingularMass make_singular(double w, double ac) {
  SingularMass s;
  s.w = w;
  s.ac_part = ac;
  s.raw = w - ac;
  s.value = std::max(0.0, s.raw);
  return s;
}

}  // namespace detail

/// W_x(f;R) minus its absolutely continuous part int_R |f_x|.
inline SingularMass singular_mass_x(const ScalarField& f, const Rect& r, int levels = 12, QuadratureSpec q = {32, 8},
                                    double fd_step = kDefaultFdStep) {
  const double w = w_x(f, r, levels, QuadratureSpec{8, q.order});
  const double ac = integrate_rect([&](double x, double y) { return std::abs(eval_grad(f, x, y, fd_step).x); }, r, q);
  return detail::make_singular(w, ac);
}

/// W_y(f;R) minus int_R |f_y|.
inline SingularMass singular_mass_y(const ScalarField& f, const Rect& r, int levels = 12, QuadratureSpec q = {32, 8},
                                    double fd_step = kDefaultFdStep) {
  const double w = w_y(f, r, levels, QuadratureSpec{8, q.order});
  const double ac = integrate_rect([&](double x, double y) { return std::abs(eval_grad(f, x, y, fd_step).y); }, r, q);
  return detail::make_singular(w, ac);
}

// ---------------------------------------------------------------------------
// condition C

using RectFunction = std::function<double(const Rect&)>;

struct ConditionCVerdict {
  bool holds = false;
  double small_sum = 0.0;  // sum of phi over the disjoint rectangles
  double large_sum = 0.0;  // sum of phi over the covering rectangles
};

namespace detail {

inline bool interiors_overlap(const Rect& p, const Rect& q) {
  return std::max(p.a, q.a) < std::min(p.b, q.b) && std::max(p.c, q.c) < std::min(p.d, q.d);
}

// Is every point of the union of `inner` inside the union of `outer`?
// Exact for axis-aligned rectangles: cut the plane into vertical slabs at
// every x edge, then compare covered y-intervals slab by slab.
inline bool union_contains(const std::vector<Rect>& outer, const std::vector<Rect>& inner) {
  std::vector<double> xs;
  for (const Rect& r : outer) xs.insert(xs.end(), {r.a, r.b});
  for (const Rect& r : inner) xs.insert(xs.end(), {r.a, r.b});
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  for (std::size_t s = 0; s + 1 < xs.size(); ++s) {
    const double lo = xs[s], hi = xs[s + 1];
    std::vector<std::pair<double, double>> cover;
    for (const Rect& r : outer)
      if (r.a <= lo && r.b >= hi) cover.emplace_back(r.c, r.d);
    std::sort(cover.begin(), cover.end());
    std::vector<std::pair<double, double>> merged;
    for (const auto& iv : cover) {
      if (!merged.empty() && iv.first <= merged.back().second)
        merged.back().second = std::max(merged.back().second, iv.second);
      else
        merged.push_back(iv);
    }
    for (const Rect& r : inner) {
      if (!(r.a <= lo && r.b >= hi)) continue;
      const bool inside = std::any_of(merged.begin(), merged.end(),
                                      [&](const auto& iv) { return iv.first <= r.c && r.d <= iv.second; });
      if (!inside) return false;
    }
  }
  return true;
}

}  // namespace detail

/// One finite instance of condition C: with rs pairwise interior-disjoint
/// and covered by Rs, does sum phi(r_i) <= sum phi(R_n) + 1e-9 hold?
/// Throws InvalidArgument if the rs overlap and ContainmentError if they
/// are not covered.
inline ConditionCVerdict condition_c_check(const RectFunction& phi, const std::vector<Rect>& rs,
                                           const std::vector<Rect>& Rs) {
  for (std::size_t i = 0; i < rs.size(); ++i)
    for (std::size_t j = i + 1; j < rs.size(); ++j)
      if (detail::interiors_overlap(rs[i], rs[j]))
        throw InvalidArgument("condition C: small rectangles " + std::to_string(i) + " and " + std::to_string(j) +
                              " overlap");
  if (!detail::union_contains(Rs, rs)) throw ContainmentError("condition C: small rectangles not covered by the large ones");
  ConditionCVerdict v;
  for (const Rect& r : rs) v.small_sum += phi(r);
  for (const Rect& r : Rs) v.large_sum += phi(r);
  v.holds = v.small_sum <= v.large_sum + 1e-9;
  return v;
}

// ---------------------------------------------------------------------------
// one variable: generalized variation of functions altered on a null set

/// A function on [a,b] equal to `base` except at finitely many interior
/// points, where it takes arbitrary values.
class DefectedFn1D {
 public:
  DefectedFn1D(Fn1D base, std::vector<std::pair<double, double>> defects = {}, double a = 0.0, double b = 1.0)
      : base_(std::move(base)), defects_(std::move(defects)), a_(a), b_(b) {
    if (!(a_ < b_)) throw InvalidArgument("DefectedFn1D needs a < b");
    std::sort(defects_.begin(), defects_.end());
    for (std::size_t i = 0; i < defects_.size(); ++i) {
      if (!(defects_[i].first > a_ && defects_[i].first < b_))
        throw InvalidArgument("defect points must be interior to the interval");
      if (i && defects_[i].first == defects_[i - 1].first) throw InvalidArgument("defect points must be distinct");
    }
  }

  double a() const { return a_; }
  double b() const { return b_; }
  const Fn1D& base() const { return base_; }
  const std::vector<std::pair<double, double>>& defects() const { return defects_; }

  bool is_defect(double t) const {
    auto it = std::lower_bound(defects_.begin(), defects_.end(), std::make_pair(t, -HUGE_VAL));
    return it != defects_.end() && it->first == t;
  }

  /// Pointwise value, defects included.
  double operator()(double t) const {
    auto it = std::lower_bound(defects_.begin(), defects_.end(), std::make_pair(t, -HUGE_VAL));
    if (it != defects_.end() && it->first == t) return it->second;
    return base_(t);
  }

  /// Approximate limit at t.  A finite defect set has density zero
  /// everywhere, so this is the base value.
  double approximate_value(double t) const { return base_(t); }

 private:
  Fn1D base_;
  std::vector<std::pair<double, double>> defects_;
  double a_;
  double b_;
};

/// Variation over dyadic partitions whose points are points of
/// approximate continuity: any partition point landing on a defect is
/// read through its approximate limit instead of the altered value.
inline double generalized_variation_1d(const DefectedFn1D& f, int levels = 16) {
  return total_variation_1d([&](double t) { return f.is_defect(t) ? f.approximate_value(t) : f(t); }, f.a(), f.b(),
                            levels);
}

struct DerivativeGap {
  double variation = 0.0;            // generalized variation
  double derivative_integral = 0.0;  // int |f'|
  double gap = 0.0;                  // variation - derivative_integral
};

/// Generalized variation minus int_a^b |f'|, the derivative taken by
/// central differences of the base (one-sided near the ends).  Zero exactly
/// for absolutely continuous bases; the singular part otherwise.
inline DerivativeGap essential_derivative_gap(const DefectedFn1D& f, QuadratureSpec q = {64, 8},
                                              double fd_step = kDefaultFdStep, int levels = 16) {
  if (!(fd_step > 0.0)) throw InvalidArgument("finite-difference step must be positive");
  const Fn1D& g = f.base();
  const double a = f.a(), b = f.b();
  auto deriv = [&](double t) {
    if (t - fd_step >= a && t + fd_step <= b) return (g(t + fd_step) - g(t - fd_step)) / (2 * fd_step);
    if (t - fd_step < a) return (-3 * g(t) + 4 * g(t + fd_step) - g(t + 2 * fd_step)) / (2 * fd_step);
    return (3 * g(t) - 4 * g(t - fd_step) + g(t - 2 * fd_step)) / (2 * fd_step);
  };
  DerivativeGap out;
  out.variation = generalized_variation_1d(f, levels);
  out.derivative_integral = integrate_line([&](double t) { return std::abs(deriv(t)); }, a, b, q);
  out.gap = out.variation - out.derivative_integral;
  return out;
}

/// One-variable bases by name: `x`, `parabola` (x(1-x)), `step(s)` (0 up to
/// s, then 1), `cantor(k|exact)`.
inline Fn1D make_base_1d(std::string_view descriptor) {
  const FieldDescriptor d = parse_descriptor(descriptor);
  if (d.name == "x") {
    detail::expect_arity(d, 0, 0);
    return [](double t) { return t; };
  }
  if (d.name == "parabola") {
    detail::expect_arity(d, 0, 0);
    return [](double t) { return t * (1.0 - t); };
  }
  if (d.name == "step") {
    detail::expect_arity(d, 0, 1);
    const double s = d.args.empty() ? 0.5 : detail::numeric_arg(d, 0);
    return [s](double t) { return t <= s ? 0.0 : 1.0; };
  }
  if (d.name == "cantor") {
    detail::expect_arity(d, 0, 1);
    const detail::Cantor1D phi{detail::cantor_depth_arg(d, 0)};
    return [phi](double t) { return phi(t); };
  }
  throw InvalidArgument("unknown one-variable base '" + d.name + "'");
}

}  // namespace surfarea
