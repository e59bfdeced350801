/// @file geometry.hpp
/// @brief small value types: planar/space vectors and axis-aligned rectangles

#pragma once

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "error.hpp"

namespace surfarea {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2 a, Vec2 b) = default;
};

inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
};

inline Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(Vec3 v) { return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z); }

/// Closed axis-aligned rectangle [a,b] x [c,d] with a < b and c < d.
///
/// Serves both as the ambient domain of a field and as the oriented
/// rectangles of Geöcze sums and rectangle functions.
struct Rect {
  double a = 0.0;
  double b = 1.0;
  double c = 0.0;
  double d = 1.0;

  Rect() = default;
  Rect(double a_, double b_, double c_, double d_) : a(a_), b(b_), c(c_), d(d_) {
    if (!(a < b) || !(c < d))
      throw InvalidArgument("rectangle requires a < b and c < d, got [" +
                            std::to_string(a) + "," + std::to_string(b) + "]x[" +
                            std::to_string(c) + "," + std::to_string(d) + "]");
  }

  double width() const { return b - a; }
  double height() const { return d - c; }
  double area() const { return (b - a) * (d - c); }
  double diameter() const { return std::hypot(b - a, d - c); }
  Vec2 center() const { return {0.5 * (a + b), 0.5 * (c + d)}; }

  bool contains(double x, double y) const { return x >= a && x <= b && y >= c && y <= d; }
  bool contains(Vec2 p) const { return contains(p.x, p.y); }
  bool contains(const Rect& r) const { return r.a >= a && r.b <= b && r.c >= c && r.d <= d; }

  friend bool operator==(const Rect&, const Rect&) = default;

  friend std::ostream& operator<<(std::ostream& os, const Rect& r) {
    return os << "[" << r.a << "," << r.b << "]x[" << r.c << "," << r.d << "]";
  }
};

/// The ambient rectangle a field is defined on.
using Domain = Rect;

inline Domain unit_square() { return {0.0, 1.0, 0.0, 1.0}; }

/// Intersection of two rectangles; throws when it has empty interior.
inline Rect intersect(const Rect& p, const Rect& q) {
  return Rect(std::max(p.a, q.a), std::min(p.b, q.b), std::max(p.c, q.c), std::min(p.d, q.d));
}

/// Rectangle shrunk by h on every side.
inline Rect shrink(const Rect& r, double h) { return Rect(r.a + h, r.b - h, r.c + h, r.d - h); }

/// The middle half of r in each direction ([1/4,3/4]^2 for the unit square).
inline Rect centered_subsquare(const Rect& r) {
  return Rect(r.a + 0.25 * r.width(), r.b - 0.25 * r.width(), r.c + 0.25 * r.height(),
              r.d - 0.25 * r.height());
}

}  // namespace surfarea
