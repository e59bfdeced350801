/// @file quadrature.hpp
/// @brief composite Gauss-Legendre quadrature on intervals and rectangles
///
/// Every integral in the library goes through these routines.  Rules of
/// order 2..16 are generated once (Newton iteration on the Legendre
/// polynomials) and shared read-only between threads.

#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "error.hpp"
#include "geometry.hpp"

namespace surfarea {

inline constexpr int kMinGaussOrder = 2;
inline constexpr int kMaxGaussOrder = 16;

/// Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Panel count and per-panel rule order of a composite rule.
struct QuadratureSpec {
  int panels = 16;
  int order = 8;
};

/// Neumaier compensated sum; long sums of cell areas stay within a few ulps.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    comp_ += std::abs(sum_) >= std::abs(v) ? (sum_ - t) + v : (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

namespace detail {

inline GaussRule make_gauss_rule(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      const double p = std::legendre(n, x);
      const double pm = std::legendre(n - 1, x);
      dp = n * (x * p - pm) / (x * x - 1.0);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double p = std::legendre(n, x);
    const double pm = std::legendre(n - 1, x);
    dp = n * (x * p - pm) / (x * x - 1.0);
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

inline void check_spec(int panels, int order) {
  if (panels < 1) throw InvalidArgument("quadrature needs at least one panel");
  if (order < kMinGaussOrder || order > kMaxGaussOrder)
    throw InvalidArgument("Gauss order must lie in 2..16, got " + std::to_string(order));
}

}  // namespace detail

/// Shared rule of the given order (2..16).
inline const GaussRule& gauss_rule(int order) {
  static const std::array<GaussRule, kMaxGaussOrder + 1> rules = [] {
    std::array<GaussRule, kMaxGaussOrder + 1> r;
    for (int n = kMinGaussOrder; n <= kMaxGaussOrder; ++n) r[n] = detail::make_gauss_rule(n);
    return r;
  }();
  if (order < kMinGaussOrder || order > kMaxGaussOrder)
    throw InvalidArgument("Gauss order must lie in 2..16, got " + std::to_string(order));
  return rules[order];
}

/// Composite Gauss-Legendre approximation of the integral of g over [a, b].
/// Exact for polynomials of degree <= 2*order-1 on each panel.
template <class F>
double integrate_line(F&& g, double a, double b, int panels, int order) {
  detail::check_spec(panels, order);
  if (a > b) throw InvalidArgument("integrate_line requires a <= b");
  const GaussRule& rule = gauss_rule(order);
  const double w = (b - a) / panels;
  CompensatedSum total;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * w;
    const double mid = lo + 0.5 * w;
    double s = 0.0;
    for (int i = 0; i < order; ++i) s += rule.weights[i] * g(mid + 0.5 * w * rule.nodes[i]);
    total.add(0.5 * w * s);
  }
  return total.value();
}

template <class F>
double integrate_line(F&& g, double a, double b, QuadratureSpec q) {
  return integrate_line(std::forward<F>(g), a, b, q.panels, q.order);
}

/// Tensor-product composite Gauss rule over R.
template <class F>
double integrate_rect(F&& f, const Rect& r, int panels, int order) {
  detail::check_spec(panels, order);
  const GaussRule& rule = gauss_rule(order);
  const double wx = r.width() / panels;
  const double wy = r.height() / panels;
  CompensatedSum total;
  for (int py = 0; py < panels; ++py) {
    const double my = r.c + (py + 0.5) * wy;
    for (int j = 0; j < order; ++j) {
      const double y = my + 0.5 * wy * rule.nodes[j];
      CompensatedSum row;
      for (int px = 0; px < panels; ++px) {
        const double mx = r.a + (px + 0.5) * wx;
        double s = 0.0;
        for (int i = 0; i < order; ++i) s += rule.weights[i] * f(mx + 0.5 * wx * rule.nodes[i], y);
        row.add(s);
      }
      total.add(rule.weights[j] * row.value());
    }
  }
  return total.value() * 0.25 * wx * wy;
}

template <class F>
double integrate_rect(F&& f, const Rect& r, QuadratureSpec q) {
  return integrate_rect(std::forward<F>(f), r, q.panels, q.order);
}

namespace detail {

// Root of g in [lo, hi] given g(lo) and g(hi) of strictly opposite sign.
template <class F>
double bisect_root(F& g, double lo, double hi, double glo) {
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if ((gm < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

template <class F>
double gauss_abs(F& g, double lo, double hi, const GaussRule& rule) {
  const double h = hi - lo;
  if (h <= 0.0) return 0.0;
  const double mid = lo + 0.5 * h;
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    s += rule.weights[i] * std::abs(g(mid + 0.5 * h * rule.nodes[i]));
  return 0.5 * h * s;
}

}  // namespace detail

/// Integral of |g| over [a, b].  Each panel is probed at its ends and
/// midpoint; wherever g changes sign the panel is cut at the root
/// (bisection to 1e-12) so every Gauss rule sees a smooth integrand.
template <class F>
double integrate_abs(F&& g, double a, double b, int panels, int order) {
  detail::check_spec(panels, order);
  if (a > b) throw InvalidArgument("integrate_abs requires a <= b");
  const GaussRule& rule = gauss_rule(order);
  const double w = (b - a) / panels;
  double total = 0.0;
  double x0 = a;
  double g0 = g(a);
  for (int p = 0; p < panels; ++p) {
    const double x2 = (p + 1 == panels) ? b : a + (p + 1) * w;
    const double x1 = 0.5 * (x0 + x2);
    const double g1 = g(x1);
    const double g2 = g(x2);
    const std::array<double, 3> xs{x0, x1, x2};
    const std::array<double, 3> gs{g0, g1, g2};
    double lo = x0;
    for (int k = 0; k < 2; ++k) {
      if ((gs[k] < 0.0 && gs[k + 1] > 0.0) || (gs[k] > 0.0 && gs[k + 1] < 0.0)) {
        const double root = detail::bisect_root(g, xs[k], xs[k + 1], gs[k]);
        total += detail::gauss_abs(g, lo, root, rule);
        lo = root;
      } else if (k == 0 && gs[1] == 0.0) {
        // a root sitting exactly on the midpoint shows no strict sign change
        total += detail::gauss_abs(g, lo, x1, rule);
        lo = x1;
      }
    }
    total += detail::gauss_abs(g, lo, x2, rule);
    x0 = x2;
    g0 = g2;
  }
  return total;
}

template <class F>
double integrate_abs(F&& g, double a, double b, QuadratureSpec q) {
  return integrate_abs(std::forward<F>(g), a, b, q.panels, q.order);
}

}  // namespace surfarea
