/// @file lantern.hpp
/// @brief the Schwarz lantern: polyhedra inscribed in the unit cylinder
///        whose areas depend on how the mesh is refined
///
/// P(m,n) has m slices of height 1/m and n sectors; consecutive rings are
/// rotated by half a sector and every band is filled with 2n congruent
/// triangles, so P(m,n) has 2mn triangles of area
///   sin(pi/n) * sqrt((1 - cos(pi/n))^2 + 1/m^2).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "error.hpp"
#include "format.hpp"
#include "geometry.hpp"

namespace surfarea {

struct LanternSpec {
  std::int64_t m = 1;  // slices
  std::int64_t n = 3;  // sectors

  void validate() const {
    if (m < 1) throw InvalidArgument("lantern needs m >= 1 slices");
    if (n < 3) throw InvalidArgument("lantern needs n >= 3 sectors");
  }
  std::int64_t triangles() const { return 2 * m * n; }
};

/// Area of one of the congruent triangles, exact trigonometry throughout.
/// 1 - cos(pi/n) is evaluated as 2 sin^2(pi/2n) to avoid cancellation.
inline double lantern_triangle_area(const LanternSpec& s) {
  s.validate();
  const double t = std::numbers::pi / static_cast<double>(s.n);
  const double half = std::sin(0.5 * t);
  const double sag = 2.0 * half * half;  // 1 - cos(pi/n)
  return std::sin(t) * std::hypot(sag, 1.0 / static_cast<double>(s.m));
}

inline double lantern_area(const LanternSpec& s) {
  return 2.0 * static_cast<double>(s.m) * static_cast<double>(s.n) * lantern_triangle_area(s);
}

inline constexpr std::int64_t kLanternOracleBudget = 1'000'000;

/// Independent brute force: builds every vertex of P(m,n) on the unit
/// cylinder (ring j at height j/m, angles 2*pi*i/n shifted by pi/n on odd
/// rings) and sums the cross-product areas of all 2mn triangles.
inline double lantern_vertex_oracle(const LanternSpec& s) {
  s.validate();
  if (s.m * s.n > kLanternOracleBudget) throw InvalidArgument("lantern oracle limited to m*n <= 1e6");
  const auto m = s.m, n = s.n;
  auto vertex = [&](std::int64_t ring, std::int64_t i) {
    const double offset = (ring % 2) ? 0.5 : 0.0;
    const double ang = 2.0 * std::numbers::pi * (static_cast<double>(i % n) + offset) / static_cast<double>(n);
    return Vec3{std::cos(ang), std::sin(ang), static_cast<double>(ring) / static_cast<double>(m)};
  };
  auto area = [](Vec3 p, Vec3 q, Vec3 r) { return 0.5 * norm(cross(q - p, r - p)); };
  double total = 0.0;
  for (std::int64_t j = 0; j < m; ++j) {
    const bool lower_shifted = (j % 2) != 0;
    for (std::int64_t i = 0; i < n; ++i) {
      if (!lower_shifted) {
        // base on ring j between i and i+1, apex on ring j+1 at i (angle i+1/2)
        total += area(vertex(j, i), vertex(j, i + 1), vertex(j + 1, i));
        // base on ring j+1 between i and i+1, apex on ring j at i+1
        total += area(vertex(j + 1, i), vertex(j + 1, i + 1), vertex(j, i + 1));
      } else {
        // ring j is shifted: its vertex i sits at angle i+1/2
        total += area(vertex(j, i), vertex(j, i + 1), vertex(j + 1, i + 1));
        total += area(vertex(j + 1, i), vertex(j + 1, i + 1), vertex(j, i));
      }
    }
  }
  return total;
}

enum class LanternPathKind { NFirst, MFirst, Diagonal, Parabolic };

/// A sequence (m_s, n_s), s = 0..steps-1, along which m, n grow:
///   n_first    m = 2^s,           n = 8 * 4^s  (n outruns m^(1/2))
///   m_first    n = n_fixed,       m = 100^(s+1)
///   diagonal   m = n = 2^(s+2)
///   parabolic  n = 2^(s+2),       m = max(1, round(c * sqrt(2)/pi^2 * n^2))
struct LanternPath {
  LanternPathKind kind = LanternPathKind::Diagonal;
  int steps = 8;
  double c = 1.0;            // parabolic only
  std::int64_t n_fixed = 8;  // m_first only

  void validate() const {
    if (steps < 1) throw InvalidArgument("lantern path needs at least one step");
    if (kind == LanternPathKind::Parabolic && !(c >= 0.0)) throw InvalidArgument("parabolic path needs c >= 0");
    const int cap = kind == LanternPathKind::MFirst ? 8 : (kind == LanternPathKind::NFirst ? 24 : 40);
    if (steps > cap) throw InvalidArgument("lantern path too long for 64-bit slice/sector counts");
    if (kind == LanternPathKind::MFirst && n_fixed < 3) throw InvalidArgument("m_first path needs n >= 3");
  }

  LanternSpec at(int s) const {
    switch (kind) {
      case LanternPathKind::NFirst: return {std::int64_t{1} << s, std::int64_t{8} << (2 * s)};
      case LanternPathKind::MFirst: {
        std::int64_t m = 1;
        for (int k = 0; k <= s; ++k) m *= 100;
        return {m, n_fixed};
      }
      case LanternPathKind::Diagonal: return {std::int64_t{4} << s, std::int64_t{4} << s};
      case LanternPathKind::Parabolic: {
        const std::int64_t n = std::int64_t{4} << s;
        const double nn = static_cast<double>(n);
        const double m = std::round(c * std::numbers::sqrt2 / (std::numbers::pi * std::numbers::pi) * nn * nn);
        return {std::max<std::int64_t>(1, static_cast<std::int64_t>(m)), n};
      }
    }
    return {};
  }
};

inline const char* to_string(LanternPathKind k) {
  switch (k) {
    case LanternPathKind::NFirst: return "n_first";
    case LanternPathKind::MFirst: return "m_first";
    case LanternPathKind::Diagonal: return "diagonal";
    case LanternPathKind::Parabolic: return "parabolic";
  }
  return "?";
}

/// Limit of the leading-order area along a path (infinite for m_first).
inline double lantern_path_reference(const LanternPath& p) {
  switch (p.kind) {
    case LanternPathKind::NFirst:
    case LanternPathKind::Diagonal: return 2.0 * std::numbers::pi;
    // (1 - cos(pi/n))^2 m^2 ~ pi^4 m^2 / (4 n^4) = c^2 / 2 along this path.
    case LanternPathKind::Parabolic: return 2.0 * std::numbers::pi * std::sqrt(0.5 * p.c * p.c + 1.0);
    case LanternPathKind::MFirst: return HUGE_VAL;
  }
  return HUGE_VAL;
}

struct LanternPoint {
  std::int64_t m = 0;
  std::int64_t n = 0;
  double area = 0.0;
};

struct LanternLimit {
  std::vector<LanternPoint> sequence;
  bool divergent = false;
  std::optional<double> limit;  // last value when finite
  double spread = 0.0;          // max - min over the last three values
};

/// Evaluates the path and classifies its tail: divergent when each of the
/// last two steps (among the last three values) more than doubles the
/// area; otherwise finite with the last value as limit and the spread of
/// the last three values as error bar.
inline LanternLimit lantern_limit(const LanternPath& path) {
  path.validate();
  LanternLimit out;
  for (int s = 0; s < path.steps; ++s) {
    const LanternSpec spec = path.at(s);
    out.sequence.push_back({spec.m, spec.n, lantern_area(spec)});
  }
  const std::size_t k = out.sequence.size();
  const std::size_t tail = std::min<std::size_t>(3, k);
  if (k >= 3) {
    out.divergent = true;
    for (std::size_t i = k - 2; i < k; ++i)
      out.divergent = out.divergent && out.sequence[i].area > 2.0 * out.sequence[i - 1].area;
  }
  double lo = HUGE_VAL, hi = -HUGE_VAL;
  for (std::size_t i = k - tail; i < k; ++i) {
    lo = std::min(lo, out.sequence[i].area);
    hi = std::max(hi, out.sequence[i].area);
  }
  out.spread = hi - lo;
  if (!out.divergent) out.limit = out.sequence.back().area;
  return out;
}

/// Path CSV: `m,n,area` rows and a trailing `# limit=<value|divergent>`.
inline void write_lantern_csv(std::ostream& out, const LanternLimit& l) {
  out << "m,n,area\n";
  for (const LanternPoint& p : l.sequence) out << p.m << ',' << p.n << ',' << format_real(p.area) << '\n';
  out << "# limit=" << (l.divergent ? std::string("divergent") : format_real(*l.limit, 5)) << '\n';
}

}  // namespace surfarea
