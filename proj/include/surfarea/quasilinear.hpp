/// @file quasilinear.hpp
/// @brief quasi-linear (continuous piecewise-affine) functions over
///        triangulations of a rectangle and their elementary area

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "fields.hpp"
#include "geometry.hpp"
#include "quadrature.hpp"

namespace surfarea {

struct Triangle2D {
  Vec2 p1;
  Vec2 p2;
  Vec2 p3;

  const Vec2& operator[](int k) const { return k == 0 ? p1 : (k == 1 ? p2 : p3); }
  friend bool operator==(const Triangle2D&, const Triangle2D&) = default;
};

/// Coefficients of Pi(x,y) = a*x + b*y + c.
struct Affine {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  double operator()(double x, double y) const { return a * x + b * y + c; }
  double operator()(Vec2 p) const { return a * p.x + b * p.y + c; }
};

/// Twice the signed area (positive for counter-clockwise vertices).
inline double orient2d(Vec2 p, Vec2 q, Vec2 r) {
  return (q.x - p.x) * (r.y - p.y) - (r.x - p.x) * (q.y - p.y);
}

/// Half the absolute determinant of [[u1,v1,1],[u2,v2,1],[u3,v3,1]].
inline double tri_area_2d(const Triangle2D& t) { return 0.5 * std::abs(orient2d(t.p1, t.p2, t.p3)); }

/// Area of the graph of an affine function with gradient (a, b) over t.
inline double lifted_tri_area(const Triangle2D& t, double a, double b) {
  return tri_area_2d(t) * std::sqrt(1.0 + a * a + b * b);
}

/// Affine function through three points (u_k, v_k, z_k).  Throws on a
/// degenerate triangle.
inline Affine affine_through(const Triangle2D& t, double z1, double z2, double z3) {
  const double dx2 = t.p2.x - t.p1.x, dy2 = t.p2.y - t.p1.y;
  const double dx3 = t.p3.x - t.p1.x, dy3 = t.p3.y - t.p1.y;
  const double det = dx2 * dy3 - dx3 * dy2;
  if (det == 0.0) throw ValidationError("cannot fit an affine piece on a degenerate triangle");
  const double dz2 = z2 - z1, dz3 = z3 - z1;
  Affine f;
  f.a = (dz2 * dy3 - dz3 * dy2) / det;
  f.b = (dx2 * dz3 - dx3 * dz2) / det;
  f.c = z1 - f.a * t.p1.x - f.b * t.p1.y;
  return f;
}

enum class Diagonal {
  LowerLeftToUpperRight,
  UpperLeftToLowerRight,
};

/// Structure of a mesh produced from a uniform grid of cells (enables
/// constant-time point location and grid overlays).
struct GridMesh {
  int nx = 0;  // cells along x
  int ny = 0;  // cells along y
  Diagonal diagonal = Diagonal::LowerLeftToUpperRight;
};

/// Continuous piecewise-affine function over a triangulation of a rectangle.
///
/// Construction validates the triangulation: no degenerate triangles
/// (area < 1e-15 |domain|), vertices inside the domain, triangle areas
/// summing to |domain| (relative 1e-12), each shared edge used by at most
/// two triangles lying on opposite sides of it, and the affine pieces
/// agreeing at the endpoints of every shared edge.
class QuasiLinearFn {
 public:
  QuasiLinearFn(Domain domain, std::vector<Triangle2D> triangles, std::vector<Affine> pieces,
                std::optional<GridMesh> grid = {})
      : domain_(domain), triangles_(std::move(triangles)), pieces_(std::move(pieces)), grid_(grid) {
    validate();
  }

  /// Pieces fitted to values at each triangle's vertices (3 per triangle).
  static QuasiLinearFn from_vertex_values(Domain domain, std::vector<Triangle2D> triangles,
                                          const std::vector<std::array<double, 3>>& values) {
    if (values.size() != triangles.size())
      throw InvalidArgument("need one value triple per triangle");
    std::vector<Affine> pieces;
    pieces.reserve(triangles.size());
    for (std::size_t i = 0; i < triangles.size(); ++i)
      pieces.push_back(affine_through(triangles[i], values[i][0], values[i][1], values[i][2]));
    return QuasiLinearFn(domain, std::move(triangles), std::move(pieces));
  }

  /// Grid of nx x ny cells over `domain`, node values row-major with x
  /// fastest ((nx+1)*(ny+1) entries), each cell cut along `diagonal`.
  static QuasiLinearFn on_grid(Domain domain, int nx, int ny, const std::vector<double>& node_values,
                               Diagonal diagonal = Diagonal::LowerLeftToUpperRight) {
    if (nx < 1 || ny < 1) throw InvalidArgument("grid needs at least one cell per axis");
    const std::size_t stride = static_cast<std::size_t>(nx) + 1;
    if (node_values.size() != stride * (static_cast<std::size_t>(ny) + 1))
      throw InvalidArgument("node value count does not match (nx+1)*(ny+1)");
    std::vector<Triangle2D> tris;
    std::vector<Affine> pieces;
    tris.reserve(2 * static_cast<std::size_t>(nx) * ny);
    pieces.reserve(tris.capacity());
    auto X = [&](int i) { return GridField::node_coord(domain.a, domain.b, i, nx + 1); };
    auto Y = [&](int j) { return GridField::node_coord(domain.c, domain.d, j, ny + 1); };
    auto Z = [&](int i, int j) { return node_values[static_cast<std::size_t>(j) * stride + i]; };
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const Vec2 ll{X(i), Y(j)}, lr{X(i + 1), Y(j)}, ur{X(i + 1), Y(j + 1)}, ul{X(i), Y(j + 1)};
        const double zll = Z(i, j), zlr = Z(i + 1, j), zur = Z(i + 1, j + 1), zul = Z(i, j + 1);
        if (diagonal == Diagonal::LowerLeftToUpperRight) {
          tris.push_back({ll, lr, ur});
          pieces.push_back(affine_through(tris.back(), zll, zlr, zur));
          tris.push_back({ll, ur, ul});
          pieces.push_back(affine_through(tris.back(), zll, zur, zul));
        } else {
          tris.push_back({ll, lr, ul});
          pieces.push_back(affine_through(tris.back(), zll, zlr, zul));
          tris.push_back({lr, ur, ul});
          pieces.push_back(affine_through(tris.back(), zlr, zur, zul));
        }
      }
    }
    return QuasiLinearFn(domain, std::move(tris), std::move(pieces), GridMesh{nx, ny, diagonal});
  }

  const Domain& domain() const { return domain_; }
  const std::vector<Triangle2D>& triangles() const { return triangles_; }
  const std::vector<Affine>& pieces() const { return pieces_; }
  const std::optional<GridMesh>& grid() const { return grid_; }
  std::size_t size() const { return triangles_.size(); }

  /// Index of a triangle containing p.
  std::size_t locate(Vec2 p) const {
    if (grid_) {
      const GridMesh& g = *grid_;
      const double sx = (p.x - domain_.a) / domain_.width() * g.nx;
      const double sy = (p.y - domain_.c) / domain_.height() * g.ny;
      const int i = std::clamp(static_cast<int>(std::floor(sx)), 0, g.nx - 1);
      const int j = std::clamp(static_cast<int>(std::floor(sy)), 0, g.ny - 1);
      const double tx = sx - i, ty = sy - j;
      const std::size_t cell = 2 * (static_cast<std::size_t>(j) * g.nx + i);
      if (g.diagonal == Diagonal::LowerLeftToUpperRight) return cell + (tx >= ty ? 0 : 1);
      return cell + (tx + ty <= 1.0 ? 0 : 1);
    }
    const double tol = 1e-12 * domain_.diameter() * domain_.diameter();
    for (std::size_t k = 0; k < triangles_.size(); ++k) {
      const Triangle2D& t = triangles_[k];
      const double s = orient2d(t.p1, t.p2, t.p3) > 0 ? 1.0 : -1.0;
      if (s * orient2d(t.p1, t.p2, p) >= -tol && s * orient2d(t.p2, t.p3, p) >= -tol &&
          s * orient2d(t.p3, t.p1, p) >= -tol)
        return k;
    }
    throw DomainError("point not covered by the triangulation");
  }

  double operator()(double x, double y) const { return pieces_[locate({x, y})](x, y); }

  /// The function as a ScalarField (gradient exact off the edges).
  ScalarField to_field(std::string name = "quasilinear") const {
    auto self = std::make_shared<const QuasiLinearFn>(*this);
    return ScalarField(
        domain_, [self](double x, double y) { return (*self)(x, y); }, Regularity::Continuous,
        GradFn([self](double x, double y) {
          const Affine& p = self->pieces_[self->locate({x, y})];
          return Vec2{p.a, p.b};
        }),
        std::move(name));
  }

 private:
  void validate() const {
    if (triangles_.empty()) throw ValidationError("empty triangulation");
    if (pieces_.size() != triangles_.size())
      throw ValidationError("one affine piece per triangle required");
    const double dom_area = domain_.area();
    const double slack = 1e-12 * domain_.diameter();
    double total = 0.0;
    for (const Triangle2D& t : triangles_) {
      const double ar = tri_area_2d(t);
      if (!(ar >= 1e-15 * dom_area)) throw ValidationError("degenerate triangle in decomposition");
      for (int k = 0; k < 3; ++k) {
        const Vec2 p = t[k];
        if (p.x < domain_.a - slack || p.x > domain_.b + slack || p.y < domain_.c - slack ||
            p.y > domain_.d + slack)
          throw ValidationError("triangle vertex outside the domain");
      }
      total += ar;
    }
    if (std::abs(total - dom_area) > 1e-12 * dom_area)
      throw ValidationError("triangles do not tile the domain (area " + std::to_string(total) + " vs " +
                            std::to_string(dom_area) + ")");

    if (grid_) {
      // Grid meshes share nodes by construction; every cell must still be
      // split into two counter-clockwise triangles.
      for (const Triangle2D& t : triangles_)
        if (!(orient2d(t.p1, t.p2, t.p3) > 0.0)) throw ValidationError("grid triangle not counter-clockwise");
      return;
    }
    // Shared-edge structure: at most two users per edge, on opposite sides,
    // with matching values at both endpoints.
    struct Use {
      std::size_t tri;
      Vec2 opposite;
    };
    auto key = [](Vec2 p, Vec2 q) {
      std::array<double, 4> k{p.x, p.y, q.x, q.y};
      if (std::tie(q.x, q.y) < std::tie(p.x, p.y)) k = {q.x, q.y, p.x, p.y};
      return k;
    };
    std::map<std::array<double, 4>, std::vector<Use>> edges;
    for (std::size_t i = 0; i < triangles_.size(); ++i) {
      const Triangle2D& t = triangles_[i];
      for (int k = 0; k < 3; ++k) edges[key(t[k], t[(k + 1) % 3])].push_back({i, t[(k + 2) % 3]});
    }
    double zscale = 1.0;
    for (std::size_t i = 0; i < triangles_.size(); ++i)
      for (int k = 0; k < 3; ++k) zscale = std::max(zscale, std::abs(pieces_[i](triangles_[i][k])));
    for (const auto& [k, uses] : edges) {
      if (uses.size() == 1) continue;
      if (uses.size() > 2) throw ValidationError("edge shared by more than two triangles (overlap)");
      const Vec2 p{k[0], k[1]}, q{k[2], k[3]};
      const double s0 = orient2d(p, q, uses[0].opposite);
      const double s1 = orient2d(p, q, uses[1].opposite);
      if (!((s0 > 0 && s1 < 0) || (s0 < 0 && s1 > 0)))
        throw ValidationError("triangles on the same side of a shared edge (overlap)");
      const Affine& f0 = pieces_[uses[0].tri];
      const Affine& f1 = pieces_[uses[1].tri];
      if (std::abs(f0(p) - f1(p)) > 1e-9 * zscale || std::abs(f0(q) - f1(q)) > 1e-9 * zscale)
        throw ValidationError("affine pieces disagree on a shared edge (discontinuous)");
    }
  }

  Domain domain_;
  std::vector<Triangle2D> triangles_;
  std::vector<Affine> pieces_;
  std::optional<GridMesh> grid_;
};

/// Sum of the lifted triangle areas.  Never below |domain|.
inline double elementary_area(const QuasiLinearFn& pi) {
  CompensatedSum total;
  const auto& tris = pi.triangles();
  const auto& pieces = pi.pieces();
  for (std::size_t i = 0; i < tris.size(); ++i) total.add(lifted_tri_area(tris[i], pieces[i].a, pieces[i].b));
  return total.value();
}

inline constexpr int kMaxInterpolationLevel = 11;

/// Uniform quasi-linear interpolant of f: values at the (2^k+1)^2 grid
/// nodes, every cell cut along `diagonal`.
inline QuasiLinearFn interpolate_quasilinear(const ScalarField& f, int k,
                                             Diagonal diagonal = Diagonal::LowerLeftToUpperRight) {
  if (k < 0) throw InvalidArgument("refinement level must be >= 0");
  if (k > kMaxInterpolationLevel)
    throw InvalidArgument("refinement level above " + std::to_string(kMaxInterpolationLevel) + " exceeds the mesh budget");
  const int n = 1 << k;
  const Domain& dom = f.domain();
  std::vector<double> values(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j) {
    const double y = GridField::node_coord(dom.c, dom.d, j, n + 1);
    for (int i = 0; i <= n; ++i)
      values[static_cast<std::size_t>(j) * (n + 1) + i] = f(GridField::node_coord(dom.a, dom.b, i, n + 1), y);
  }
  return QuasiLinearFn::on_grid(dom, n, n, values, diagonal);
}

/// max |f - g| over the (m+1)^2 uniform sample grid of `region`; a lower
/// bound on the true sup distance.
inline double sup_distance(const ScalarField& f, const ScalarField& g, int m, const Rect& region) {
  if (m < 1) throw InvalidArgument("sample resolution must be >= 1");
  if (!f.domain().contains(region) || !g.domain().contains(region))
    throw DomainError("sup_distance region outside a field domain");
  double best = 0.0;
  for (int j = 0; j <= m; ++j) {
    const double y = GridField::node_coord(region.c, region.d, j, m + 1);
    for (int i = 0; i <= m; ++i) {
      const double x = GridField::node_coord(region.a, region.b, i, m + 1);
      best = std::max(best, std::abs(f(x, y) - g(x, y)));
    }
  }
  return best;
}

/// sup_distance over the common domain of f and g.
inline double sup_distance(const ScalarField& f, const ScalarField& g, int m) {
  return sup_distance(f, g, m, intersect(f.domain(), g.domain()));
}

/// Re-expresses a grid-generated function on a grid refined by an integer
/// factor (same diagonal), which nests every fine triangle inside a coarse
/// one.
inline QuasiLinearFn refine_grid(const QuasiLinearFn& pi, int factor) {
  if (!pi.grid()) throw InvalidArgument("refine_grid needs a grid-generated mesh");
  if (factor < 1) throw InvalidArgument("refinement factor must be >= 1");
  if (factor == 1) return pi;
  const GridMesh& g = *pi.grid();
  const int nx = g.nx * factor, ny = g.ny * factor;
  const Domain& dom = pi.domain();
  std::vector<double> values(static_cast<std::size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j) {
    const double y = GridField::node_coord(dom.c, dom.d, j, ny + 1);
    for (int i = 0; i <= nx; ++i)
      values[static_cast<std::size_t>(j) * (nx + 1) + i] = pi(GridField::node_coord(dom.a, dom.b, i, nx + 1), y);
  }
  return QuasiLinearFn::on_grid(dom, nx, ny, values, g.diagonal);
}

/// Brings two grid-generated functions onto one mesh by overlaying their
/// grids on the lcm resolution.  Requires equal domains and diagonals and
/// the same refinement factor along both axes for each input.
inline std::pair<QuasiLinearFn, QuasiLinearFn> common_refinement(const QuasiLinearFn& p1,
                                                                 const QuasiLinearFn& p2) {
  if (p1.triangles() == p2.triangles()) return {p1, p2};
  if (!p1.grid() || !p2.grid() || !(p1.domain() == p2.domain()) ||
      p1.grid()->diagonal != p2.grid()->diagonal)
    throw InvalidArgument("incompatible meshes: need grid meshes on one domain with one diagonal");
  const GridMesh g1 = *p1.grid(), g2 = *p2.grid();
  // each cell is cut k x k so its diagonal runs through sub-cell corners
  const int nx = std::lcm(g1.nx, g2.nx), ny = std::lcm(g1.ny, g2.ny);
  if (nx / g1.nx != ny / g1.ny || nx / g2.nx != ny / g2.ny)
    throw InvalidArgument("incompatible meshes: grid resolutions do not nest");
  return {refine_grid(p1, nx / g1.nx), refine_grid(p2, nx / g2.nx)};
}

/// Debug dump, one `x1 y1 x2 y2 x3 y3 a b c` line per triangle.
inline void write_mesh(std::ostream& out, const QuasiLinearFn& pi) {
  const auto old = out.precision(17);
  for (std::size_t i = 0; i < pi.size(); ++i) {
    const Triangle2D& t = pi.triangles()[i];
    const Affine& f = pi.pieces()[i];
    out << t.p1.x << ' ' << t.p1.y << ' ' << t.p2.x << ' ' << t.p2.y << ' ' << t.p3.x << ' ' << t.p3.y
        << ' ' << f.a << ' ' << f.b << ' ' << f.c << '\n';
  }
  out.precision(old);
}

}  // namespace surfarea
