/// @file mollify.hpp
/// @brief integral means f_h (box averages over [-h,h]^2 windows) on the
///        shrunken rectangle Q_h, their partial derivatives and L1 norms

#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "error.hpp"
#include "fields.hpp"
#include "format.hpp"
#include "geometry.hpp"
#include "quadrature.hpp"

namespace surfarea {

enum class MollifyMode {
  Direct,  // every evaluation integrates the window
  Grid,    // f_h sampled once on a (2^k+1)^2 grid, then bilinear
};

struct MollifyOptions {
  /// Per-axis composite rule over the window.
  QuadratureSpec window{4, 8};
  /// Fields tagged Integrable get at least this many panels per axis.
  int integrable_panels = 16;
  MollifyMode mode = MollifyMode::Direct;
  int grid_level = 7;
};

namespace detail {

inline QuadratureSpec window_rule(const ScalarField& f, const MollifyOptions& opt) {
  QuadratureSpec q = opt.window;
  if (f.regularity() == Regularity::Integrable) q.panels = std::max(q.panels, opt.integrable_panels);
  return q;
}

inline void check_radius(const ScalarField& f, double h) {
  const Domain& d = f.domain();
  if (!(h > 0.0) || !(2.0 * h < std::min(d.width(), d.height())))
    throw InvalidArgument("mollifier radius h = " + std::to_string(h) + " must satisfy 0 < h < min(width, height)/2");
}

inline double window_mean(const ScalarField& f, double h, double x, double y, QuadratureSpec q) {
  return integrate_rect(f, Rect(x - h, x + h, y - h, y + h), q) / (4.0 * h * h);
}

inline Vec2 window_partials(const ScalarField& f, double h, double x, double y, QuadratureSpec q) {
  const double s = 1.0 / (4.0 * h * h);
  const double px = integrate_line([&](double eta) { return f(x + h, y + eta) - f(x - h, y + eta); }, -h, h, q);
  const double py = integrate_line([&](double xi) { return f(x + xi, y + h) - f(x + xi, y - h); }, -h, h, q);
  return {s * px, s * py};
}

}  // namespace detail

/// Q_h: the domain shrunk by h on every side.
inline Rect mollified_domain(const ScalarField& f, double h) {
  detail::check_radius(f, h);
  return shrink(f.domain(), h);
}

/// Partial derivatives of f_h at (x,y) in Q_h, from the boundary
/// differences of the window:
///   d/dx f_h = (1/4h^2) int_{-h}^{h} [f(x+h, y+eta) - f(x-h, y+eta)] deta
/// and symmetrically in y.
inline Vec2 integral_mean_partials(const ScalarField& f, double h, double x, double y, const MollifyOptions& opt = {}) {
  const Rect qh = mollified_domain(f, h);
  if (!qh.contains(x, y)) throw DomainError("integral_mean_partials: point outside Q_h");
  return detail::window_partials(f, h, x, y, detail::window_rule(f, opt));
}

/// The integral mean
///   f_h(x,y) = (1/4h^2) int_{-h}^{h} int_{-h}^{h} f(x+xi, y+eta) dxi deta
/// as a C1 field on Q_h, with the exact partials as its gradient.  In Grid
/// mode f_h is tabulated on a (2^grid_level+1)^2 grid and interpolated;
/// the mode is recorded in the field's name.
inline ScalarField integral_mean(const ScalarField& f, double h, const MollifyOptions& opt = {}) {
  const Rect qh = mollified_domain(f, h);
  const QuadratureSpec q = detail::window_rule(f, opt);
  const std::string name = f.name() + "_h[" + format_real(h) + "]";
  if (opt.mode == MollifyMode::Grid) {
    if (opt.grid_level < 1 || opt.grid_level > 12) throw InvalidArgument("mollifier grid level must lie in 1..12");
    const int n = (1 << opt.grid_level) + 1;
    const GridField g = GridField::sample(qh, n, n, [&](double x, double y) { return detail::window_mean(f, h, x, y, q); });
    return g.to_field(name + "{grid" + std::to_string(opt.grid_level) + "}");
  }
  return ScalarField(
      qh, [f, h, q](double x, double y) { return detail::window_mean(f, h, x, y, q); }, Regularity::C1,
      GradFn([f, h, q](double x, double y) { return detail::window_partials(f, h, x, y, q); }), name);
}

/// int_R |f|.
inline double l1_norm(const ScalarField& f, const Rect& r, QuadratureSpec q = {32, 8}) {
  if (!f.domain().contains(r)) throw DomainError("l1_norm: rectangle outside the field domain");
  return integrate_rect([&](double x, double y) { return std::abs(f(x, y)); }, r, q);
}

inline double l1_norm(const ScalarField& f, QuadratureSpec q = {32, 8}) { return l1_norm(f, f.domain(), q); }

}  // namespace surfarea
