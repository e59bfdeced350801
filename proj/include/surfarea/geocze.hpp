/// @file geocze.hpp
/// @brief Geöcze edge integrals, the rectangle functional Gamma(f;R), Geöcze
///        sums over grid subdivisions and the dyadic refinement ladder
///
/// For R = [a,b] x [c,d]:
///   G_X(f;R) = int_a^b |f(x,d) - f(x,c)| dx
///   G_Y(f;R) = int_c^d |f(b,y) - f(a,y)| dy
///   Gamma(f;R) = sqrt(G_X^2 + G_Y^2 + |R|^2)
/// and the Geöcze sum of a subdivision D is the sum of Gamma over its
/// rectangles.  Sums over nested subdivisions never decrease, and their
/// supremum is the Lebesgue area of the graph.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "error.hpp"
#include "fields.hpp"
#include "format.hpp"
#include "geometry.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"

namespace surfarea {

/// Grid subdivision of a rectangle by strictly increasing cut lists.
class Subdivision {
 public:
  Subdivision(std::vector<double> xs, std::vector<double> ys) : xs_(std::move(xs)), ys_(std::move(ys)) {
    auto check = [](const std::vector<double>& v, const char* axis) {
      if (v.size() < 2) throw InvalidArgument(std::string("subdivision needs >= 2 cuts along ") + axis);
      for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i - 1] < v[i])) throw InvalidArgument(std::string("subdivision cuts along ") + axis + " must increase strictly");
    };
    check(xs_, "x");
    check(ys_, "y");
  }

  /// m x n equal cells.
  static Subdivision uniform(const Rect& r, int m, int n) {
    if (m < 1 || n < 1) throw InvalidArgument("uniform subdivision needs m, n >= 1");
    std::vector<double> xs(m + 1), ys(n + 1);
    for (int i = 0; i <= m; ++i) xs[i] = GridField::node_coord(r.a, r.b, i, m + 1);
    for (int j = 0; j <= n; ++j) ys[j] = GridField::node_coord(r.c, r.d, j, n + 1);
    return Subdivision(std::move(xs), std::move(ys));
  }

  /// 2^k x 2^k equal cells.
  static Subdivision dyadic(const Rect& r, int k) {
    if (k < 0 || k > 14) throw InvalidArgument("dyadic level must lie in 0..14");
    return uniform(r, 1 << k, 1 << k);
  }

  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& ys() const { return ys_; }
  std::size_t columns() const { return xs_.size() - 1; }
  std::size_t rows() const { return ys_.size() - 1; }
  std::size_t cells() const { return columns() * rows(); }
  Rect bounds() const { return Rect(xs_.front(), xs_.back(), ys_.front(), ys_.back()); }
  Rect cell(std::size_t i, std::size_t j) const { return Rect(xs_[i], xs_[i + 1], ys_[j], ys_[j + 1]); }

  double max_diameter() const {
    double w = 0.0, h = 0.0;
    for (std::size_t i = 0; i + 1 < xs_.size(); ++i) w = std::max(w, xs_[i + 1] - xs_[i]);
    for (std::size_t j = 0; j + 1 < ys_.size(); ++j) h = std::max(h, ys_[j + 1] - ys_[j]);
    return std::hypot(w, h);
  }

 private:
  std::vector<double> xs_;
  std::vector<double> ys_;
};

namespace detail {

inline void require_inside(const ScalarField& f, const Rect& r, const char* op) {
  if (!f.domain().contains(r)) throw DomainError(std::string(op) + ": rectangle outside the field domain");
}

inline double g_x_unchecked(const ScalarField& f, const Rect& r, QuadratureSpec q) {
  return integrate_abs([&](double x) { return f(x, r.d) - f(x, r.c); }, r.a, r.b, q);
}

inline double g_y_unchecked(const ScalarField& f, const Rect& r, QuadratureSpec q) {
  return integrate_abs([&](double y) { return f(r.b, y) - f(r.a, y); }, r.c, r.d, q);
}

inline double gamma_unchecked(const ScalarField& f, const Rect& r, QuadratureSpec q) {
  const double gx = g_x_unchecked(f, r, q);
  const double gy = g_y_unchecked(f, r, q);
  const double ar = r.area();
  return std::sqrt(gx * gx + gy * gy + ar * ar);
}

}  // namespace detail

/// G_X(f;R): integral over [a,b] of the jump between the top and bottom traces.
inline double g_x(const ScalarField& f, const Rect& r, QuadratureSpec q = {}) {
  detail::require_inside(f, r, "g_x");
  return detail::g_x_unchecked(f, r, q);
}

/// G_Y(f;R): integral over [c,d] of the jump between the right and left traces.
inline double g_y(const ScalarField& f, const Rect& r, QuadratureSpec q = {}) {
  detail::require_inside(f, r, "g_y");
  return detail::g_y_unchecked(f, r, q);
}

/// Gamma(f;R) = |(G_X, G_Y, |R|)|; never below |R|.
inline double gamma(const ScalarField& f, const Rect& r, QuadratureSpec q = {}) {
  detail::require_inside(f, r, "gamma");
  return detail::gamma_unchecked(f, r, q);
}

/// Sum of Gamma(f;R) over the rectangles of D.  Rows are summed
/// independently and then added in order, so the result does not depend
/// on the thread count.
inline double geocze_sum(const ScalarField& f, const Subdivision& dsub, QuadratureSpec q = {}, unsigned threads = 1) {
  detail::require_inside(f, dsub.bounds(), "geocze_sum");
  const std::size_t rows = dsub.rows(), cols = dsub.columns();
  std::vector<double> row_sums(rows, 0.0);
  parallel_for(rows, threads, [&](std::size_t j) {
    CompensatedSum s;
    for (std::size_t i = 0; i < cols; ++i) s.add(detail::gamma_unchecked(f, dsub.cell(i, j), q));
    row_sums[j] = s.value();
  });
  CompensatedSum total;
  for (double s : row_sums) total.add(s);
  return total.value();
}

struct LadderLevel {
  int level = 0;
  std::uint64_t cells = 0;
  double G = 0.0;
  double delta = 0.0;  // max cell diameter
};

/// Geöcze sums over the dyadic subdivisions 2^k x 2^k, k = 0..max_level.
struct GeoczeLadder {
  std::vector<LadderLevel> levels;
  double estimate = 0.0;
  bool converged = false;
  /// First level from which every later step changed the sum by < tol (relative).
  std::optional<int> converged_level;
};

struct LadderOptions {
  int max_level = 7;
  int order = 8;
  double tol = 1e-4;  // relative
  unsigned threads = 1;
  /// Rectangle to subdivide; the field's domain when empty.
  std::optional<Rect> region;
};

/// Edge panels used at dyadic level k: max(4, 256 / 2^k).
inline int ladder_panels(int level) { return std::max(4, 256 >> std::min(level, 30)); }

/// Dyadic Geöcze ladder.  Levels are independent sums over nested
/// subdivisions.  `converged` is set when the last step changed the sum by
/// less than tol (relative); fields tagged Integrable must stay within tol
/// over the last three steps.  A ladder that keeps growing is reported,
/// not thrown.
inline GeoczeLadder geocze_area(const ScalarField& f, const LadderOptions& opt = {}) {
  if (opt.max_level < 0) throw InvalidArgument("max_level must be >= 0");
  if (!(opt.tol > 0.0)) throw InvalidArgument("ladder tolerance must be positive");
  const Rect region = opt.region.value_or(f.domain());
  detail::require_inside(f, region, "geocze_area");
  GeoczeLadder out;
  for (int k = 0; k <= opt.max_level; ++k) {
    const Subdivision dsub = Subdivision::dyadic(region, k);
    const double g = geocze_sum(f, dsub, QuadratureSpec{ladder_panels(k), opt.order}, opt.threads);
    out.levels.push_back({k, static_cast<std::uint64_t>(dsub.cells()), g, dsub.max_diameter()});
  }
  out.estimate = out.levels.back().G;

  auto small_step = [&](std::size_t k) {
    const double gk = out.levels[k].G, gp = out.levels[k - 1].G;
    return std::abs(gk - gp) < opt.tol * std::max(1.0, std::abs(gk));
  };
  const std::size_t n = out.levels.size();
  const std::size_t needed = f.regularity() == Regularity::Integrable ? 3 : 1;
  if (n > needed) {
    out.converged = true;
    for (std::size_t k = n - needed; k < n; ++k) out.converged = out.converged && small_step(k);
  }
  if (out.converged) {
    std::size_t first = n - 1;
    while (first > 0 && small_step(first)) --first;
    out.converged_level = static_cast<int>(first);
  }
  return out;
}

/// Ladder CSV: header `level,cells,G,delta` and one row per level.
inline void write_ladder_csv(std::ostream& out, const GeoczeLadder& ladder) {
  out << "level,cells,G,delta\n";
  for (const LadderLevel& l : ladder.levels)
    out << l.level << ',' << l.cells << ',' << format_real(l.G) << ',' << format_real(l.delta) << '\n';
}

}  // namespace surfarea
