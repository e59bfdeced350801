/// @file steiner.hpp
/// @brief Steiner's midpoint inequality A((f1+f2)/2) <= (A(f1)+A(f2))/2 at
///        the level of Geöcze sums and of elementary areas

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "error.hpp"
#include "fields.hpp"
#include "geocze.hpp"
#include "quasilinear.hpp"

namespace surfarea {

struct NormSuperadditivity {
  double lhs = 0.0;  // sum of |v_i|
  double rhs = 0.0;  // |sum of v_i|
  bool holds = false;
};

/// sum |v_i| >= |sum v_i| for vectors of R^3 (equality iff all parallel
/// with the same orientation).
inline NormSuperadditivity vector_norm_superadditivity(const std::vector<Vec3>& vs) {
  if (vs.empty()) throw InvalidArgument("vector_norm_superadditivity needs at least one vector");
  NormSuperadditivity out;
  Vec3 sum{};
  for (const Vec3& v : vs) {
    out.lhs += norm(v);
    sum = sum + v;
  }
  out.rhs = norm(sum);
  out.holds = out.lhs >= out.rhs - 1e-12;
  return out;
}

/// (G(f1;D) + G(f2;D))/2 - G((f1+f2)/2; D); nonnegative up to quadrature error.
inline double steiner_gap_subdivision(const ScalarField& f1, const ScalarField& f2, const Subdivision& dsub,
                                      QuadratureSpec q = {}, unsigned threads = 1) {
  if (!(f1.domain() == f2.domain())) throw InvalidArgument("steiner_gap_subdivision: fields must share a domain");
  const double g1 = geocze_sum(f1, dsub, q, threads);
  const double g2 = geocze_sum(f2, dsub, q, threads);
  const double gm = geocze_sum(midpoint(f1, f2), dsub, q, threads);
  return 0.5 * (g1 + g2) - gm;
}

/// (a(P1) + a(P2))/2 - a((P1+P2)/2) over a common triangulation (grid
/// meshes are overlaid first).  Per triangle this is
///   |T| (|v1| + |v2| - |v1 + v2|),  v_k = (1/2, a_k/2, b_k/2),
/// accumulated through vector_norm_superadditivity.
inline double steiner_gap_quasilinear(const QuasiLinearFn& p1, const QuasiLinearFn& p2) {
  const auto [q1, q2] = common_refinement(p1, p2);
  if (q1.triangles() != q2.triangles()) throw InvalidArgument("incompatible meshes");
  double gap = 0.0;
  for (std::size_t i = 0; i < q1.size(); ++i) {
    const Affine& u = q1.pieces()[i];
    const Affine& w = q2.pieces()[i];
    const NormSuperadditivity s =
        vector_norm_superadditivity({Vec3{0.5, 0.5 * u.a, 0.5 * u.b}, Vec3{0.5, 0.5 * w.a, 0.5 * w.b}});
    gap += tri_area_2d(q1.triangles()[i]) * (s.lhs - s.rhs);
  }
  return gap;
}

/// max over an (samples+1)^2 grid of |grad f1 - grad f2|.  For a pair
/// attaining equality in Steiner's inequality with both fields absolutely
/// continuous in the sense of Tonelli, f1 - f2 is constant and this is ~0.
inline double equality_flatness_residual(const ScalarField& f1, const ScalarField& f2, int samples = 64,
                                         double fd_step = kDefaultFdStep) {
  if (samples < 1) throw InvalidArgument("samples must be >= 1");
  const Rect r = intersect(f1.domain(), f2.domain());
  double best = 0.0;
  for (int j = 0; j <= samples; ++j) {
    const double y = GridField::node_coord(r.c, r.d, j, samples + 1);
    for (int i = 0; i <= samples; ++i) {
      const double x = GridField::node_coord(r.a, r.b, i, samples + 1);
      best = std::max(best, norm(eval_grad(f1, x, y, fd_step) - eval_grad(f2, x, y, fd_step)));
    }
  }
  return best;
}

}  // namespace surfarea
