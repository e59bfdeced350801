/// @file fields.hpp
/// @brief scalar fields z = f(x,y) on rectangles, the builtin catalog,
///        grid-sampled fields and numerical gradients

#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <fstream>
#include <functional>
#include <istream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cantor.hpp"
#include "error.hpp"
#include "geometry.hpp"

namespace surfarea {

enum class Regularity { C1, Continuous, Integrable };

inline const char* to_string(Regularity r) {
  switch (r) {
    case Regularity::C1: return "C1";
    case Regularity::Continuous: return "Continuous";
    case Regularity::Integrable: return "Integrable";
  }
  return "?";
}

/// The weaker of two regularity tags.
inline Regularity weaker(Regularity p, Regularity q) {
  return static_cast<Regularity>(std::max(static_cast<int>(p), static_cast<int>(q)));
}

using EvalFn = std::function<double(double, double)>;
using GradFn = std::function<Vec2(double, double)>;

/// Real-valued function on a closed rectangle.
///
/// Immutable after construction; copies share the evaluator, so a field
/// can be handed to any number of concurrent evaluations.  `grad`, when
/// present, is exact wherever the field is differentiable (almost
/// everywhere for the Continuous/Integrable catalog entries).
class ScalarField {
 public:
  ScalarField(Domain domain, EvalFn eval, Regularity regularity, std::optional<GradFn> grad = {},
              std::string name = "field")
      : domain_(domain),
        eval_(std::make_shared<const EvalFn>(std::move(eval))),
        grad_(grad ? std::make_shared<const GradFn>(std::move(*grad)) : nullptr),
        regularity_(regularity),
        name_(std::move(name)) {}

  double operator()(double x, double y) const { return (*eval_)(x, y); }
  double operator()(Vec2 p) const { return (*eval_)(p.x, p.y); }

  const Domain& domain() const { return domain_; }
  Regularity regularity() const { return regularity_; }
  const std::string& name() const { return name_; }

  bool has_grad() const { return grad_ != nullptr; }
  Vec2 grad(double x, double y) const { return (*grad_)(x, y); }

  /// Same evaluator on a sub-rectangle of the domain.
  ScalarField restricted(const Rect& r) const {
    if (!domain_.contains(r)) throw DomainError("restriction rectangle leaves the field domain");
    ScalarField out = *this;
    out.domain_ = r;
    return out;
  }

  ScalarField renamed(std::string name) const {
    ScalarField out = *this;
    out.name_ = std::move(name);
    return out;
  }

 private:
  Domain domain_;
  std::shared_ptr<const EvalFn> eval_;
  std::shared_ptr<const GradFn> grad_;
  Regularity regularity_;
  std::string name_;
};

// ---------------------------------------------------------------------------
// combinators

/// w1*f1 + w2*f2 on the common domain; gradient present only if both have one.
inline ScalarField linear_combination(double w1, const ScalarField& f1, double w2,
                                      const ScalarField& f2, std::string name = "combination") {
  const Domain dom = intersect(f1.domain(), f2.domain());
  std::optional<GradFn> grad;
  if (f1.has_grad() && f2.has_grad())
    grad = [=](double x, double y) { return w1 * f1.grad(x, y) + w2 * f2.grad(x, y); };
  return ScalarField(
      dom, [=](double x, double y) { return w1 * f1(x, y) + w2 * f2(x, y); },
      weaker(f1.regularity(), f2.regularity()), grad, std::move(name));
}

/// Pointwise (f1 + f2) / 2.
inline ScalarField midpoint(const ScalarField& f1, const ScalarField& f2) {
  return linear_combination(0.5, f1, 0.5, f2, "(" + f1.name() + "+" + f2.name() + ")/2");
}

/// Pointwise f - g on the intersection of the domains.
inline ScalarField difference(const ScalarField& f, const ScalarField& g) {
  return linear_combination(1.0, f, -1.0, g, f.name() + "-" + g.name());
}

// ---------------------------------------------------------------------------
// grid-sampled fields

/// Node values on a uniform nx x ny grid, bilinearly interpolated.
/// Node (i,j) sits at (x_lo + i*dx, y_lo + j*dy); storage is row-major
/// with x fastest.
class GridField {
 public:
  GridField(Domain domain, int nx, int ny, std::vector<double> values)
      : domain_(domain), nx_(nx), ny_(ny), values_(std::move(values)) {
    if (nx < 2 || ny < 2) throw InvalidArgument("grid field needs at least 2x2 nodes");
    if (values_.size() != static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny))
      throw InvalidArgument("grid field value count does not match nx*ny");
  }

  /// Samples f at the nodes of an nx x ny grid over `domain`.
  template <class F>
  static GridField sample(const Domain& domain, int nx, int ny, F&& f) {
    std::vector<double> v(static_cast<std::size_t>(nx) * ny);
    for (int j = 0; j < ny; ++j) {
      const double y = node_coord(domain.c, domain.d, j, ny);
      for (int i = 0; i < nx; ++i) v[static_cast<std::size_t>(j) * nx + i] = f(node_coord(domain.a, domain.b, i, nx), y);
    }
    return GridField(domain, nx, ny, std::move(v));
  }

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  const Domain& domain() const { return domain_; }
  const std::vector<double>& values() const { return values_; }
  double node(int i, int j) const { return values_[static_cast<std::size_t>(j) * nx_ + i]; }

  double operator()(double x, double y) const {
    const auto [i, tx] = locate(x, domain_.a, domain_.b, nx_);
    const auto [j, ty] = locate(y, domain_.c, domain_.d, ny_);
    const double v00 = node(i, j), v10 = node(i + 1, j);
    const double v01 = node(i, j + 1), v11 = node(i + 1, j + 1);
    return (1 - ty) * ((1 - tx) * v00 + tx * v10) + ty * ((1 - tx) * v01 + tx * v11);
  }

  /// Wraps the interpolant as a ScalarField (no analytic gradient).
  ScalarField to_field(std::string name = "grid") const {
    auto self = std::make_shared<const GridField>(*this);
    return ScalarField(
        domain_, [self](double x, double y) { return (*self)(x, y); }, Regularity::Continuous, {},
        std::move(name));
  }

  static double node_coord(double lo, double hi, int i, int n) {
    if (i == n - 1) return hi;
    return lo + (hi - lo) * i / (n - 1);
  }

 private:
  static std::pair<int, double> locate(double t, double lo, double hi, int n) {
    double s = (t - lo) / (hi - lo) * (n - 1);
    // snap rounding noise so node coordinates return node values exactly
    const double r = std::round(s);
    if (std::abs(s - r) <= 8 * std::numeric_limits<double>::epsilon() * (n - 1)) s = r;
    int i = static_cast<int>(std::floor(s));
    i = std::clamp(i, 0, n - 2);
    return {i, s - i};
  }

  Domain domain_;
  int nx_;
  int ny_;
  std::vector<double> values_;
};

namespace detail {

inline bool parse_double(std::string_view tok, double& out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

}  // namespace detail

/// Reads the plain-text grid format:
///   line 1: `nx ny x_lo x_hi y_lo y_hi`
///   then nx*ny whitespace-separated reals, row-major with x fastest.
/// Values are accepted as-is (no range checks).
inline GridField parse_grid_field(std::istream& in, const std::string& source = "<grid>") {
  struct Token {
    std::string text;
    std::size_t line;
    std::size_t column;
  };
  std::vector<Token> header;
  std::vector<double> values;
  std::string line;
  std::size_t lineno = 0;
  std::size_t last_line = 1, last_col = 1;
  int nx = 0, ny = 0;
  std::size_t expected = 0;

  while (std::getline(in, line)) {
    ++lineno;
    std::size_t pos = 0;
    while (pos < line.size()) {
      while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
      if (pos >= line.size()) break;
      std::size_t end = pos;
      while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end]))) ++end;
      Token tok{line.substr(pos, end - pos), lineno, pos + 1};
      last_line = lineno;
      last_col = end + 1;
      pos = end;
      if (lineno == 1) {
        if (header.size() == 6)
          throw ParseError(source, tok.line, tok.column, "header line holds exactly 'nx ny x_lo x_hi y_lo y_hi'");
        header.push_back(tok);
        if (header.size() == 6) {
          auto as_int = [&](const Token& t) {
            int v = 0;
            auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
            if (ec != std::errc() || p != t.text.data() + t.text.size() || v < 2)
              throw ParseError(source, t.line, t.column,
                               "expected node count >= 2, got '" + t.text + "'");
            return v;
          };
          nx = as_int(header[0]);
          ny = as_int(header[1]);
          expected = static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
          values.reserve(expected);
        }
        continue;
      }
      if (header.size() < 6)
        throw ParseError(source, header.empty() ? 1 : header.back().line,
                         header.empty() ? 1 : header.back().column + header.back().text.size(),
                         "incomplete header, expected 'nx ny x_lo x_hi y_lo y_hi'");
      double v = 0.0;
      if (!detail::parse_double(tok.text, v))
        throw ParseError(source, tok.line, tok.column, "expected a real number, got '" + tok.text + "'");
      if (values.size() == expected)
        throw ParseError(source, tok.line, tok.column,
                         "extra value beyond nx*ny = " + std::to_string(expected));
      values.push_back(v);
    }
  }
  if (header.size() < 6)
    throw ParseError(source, last_line, last_col, "incomplete header, expected 'nx ny x_lo x_hi y_lo y_hi'");
  double bounds[4];
  for (int k = 0; k < 4; ++k)
    if (!detail::parse_double(header[2 + k].text, bounds[k]))
      throw ParseError(source, header[2 + k].line, header[2 + k].column,
                       "expected a real number, got '" + header[2 + k].text + "'");
  if (!(bounds[0] < bounds[1]) || !(bounds[2] < bounds[3]))
    throw ParseError(source, header[2].line, header[2].column, "domain requires x_lo < x_hi and y_lo < y_hi");
  if (values.size() != expected)
    throw ParseError(source, last_line, last_col,
                     "expected " + std::to_string(expected) + " values, found " + std::to_string(values.size()));
  return GridField(Domain(bounds[0], bounds[1], bounds[2], bounds[3]), nx, ny, std::move(values));
}

inline GridField load_grid_field(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open grid file '" + path + "'");
  return parse_grid_field(in, path);
}

inline void write_grid_field(std::ostream& out, const GridField& g) {
  const Domain& d = g.domain();
  out.precision(17);
  out << g.nx() << ' ' << g.ny() << ' ' << d.a << ' ' << d.b << ' ' << d.c << ' ' << d.d << '\n';
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) out << (i ? " " : "") << g.node(i, j);
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// builtin catalog

/// `name(arg1,arg2,...)`; arguments are kept as raw tokens.
struct FieldDescriptor {
  std::string name;
  std::vector<std::string> args;
};

inline std::string to_string(const FieldDescriptor& d) {
  std::string s = d.name + "(";
  for (std::size_t i = 0; i < d.args.size(); ++i) s += (i ? "," : "") + d.args[i];
  return s + ")";
}

/// Parses `name(p1,p2,...)`; `name` and `name()` both mean no arguments.
inline FieldDescriptor parse_descriptor(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  const std::string src(text);
  auto fail = [&](std::size_t col, const std::string& what) -> FieldDescriptor {
    throw ParseError("descriptor '" + src + "'", 1, col, what);
  };
  std::string_view t = trim(text);
  if (t.empty()) return fail(1, "empty field descriptor");
  const std::size_t open = t.find('(');
  FieldDescriptor d;
  if (open == std::string_view::npos) {
    d.name = std::string(t);
  } else {
    if (t.back() != ')') return fail(t.size(), "missing closing ')'");
    d.name = std::string(trim(t.substr(0, open)));
    std::string_view inner = trim(t.substr(open + 1, t.size() - open - 2));
    if (!inner.empty()) {
      std::size_t start = 0;
      while (true) {
        const std::size_t comma = inner.find(',', start);
        std::string_view arg = trim(inner.substr(start, comma == std::string_view::npos ? inner.npos : comma - start));
        if (arg.empty()) return fail(open + 2 + start, "empty argument");
        d.args.emplace_back(arg);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
    }
  }
  if (d.name.empty()) return fail(1, "missing field name");
  for (char ch : d.name)
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'))
      return fail(1, "invalid character in field name '" + d.name + "'");
  return d;
}

namespace detail {

inline double numeric_arg(const FieldDescriptor& d, std::size_t i) {
  double v = 0.0;
  if (!parse_double(d.args[i], v) || !std::isfinite(v))
    throw InvalidArgument(to_string(d) + ": argument " + std::to_string(i + 1) + " ('" + d.args[i] +
                          "') is not a real number");
  return v;
}

inline void expect_arity(const FieldDescriptor& d, std::size_t lo, std::size_t hi) {
  if (d.args.size() < lo || d.args.size() > hi)
    throw InvalidArgument(d.name + " expects " +
                          (lo == hi ? std::to_string(lo) : std::to_string(lo) + ".." + std::to_string(hi)) +
                          " parameter(s), got " + std::to_string(d.args.size()));
}

// Depth argument of the Cantor family: "exact" or a nonnegative integer.
// Returns -1 for exact.
inline int cantor_depth_arg(const FieldDescriptor& d, std::size_t i) {
  if (d.args.size() <= i || d.args[i] == "exact") return -1;
  int k = 0;
  const std::string& s = d.args[i];
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), k);
  if (ec != std::errc() || p != s.data() + s.size() || k < 0 || k > 40)
    throw InvalidArgument(d.name + ": depth must be 'exact' or an integer in 0..40, got '" + s + "'");
  return k;
}

struct Cantor1D {
  int depth;  // -1 = exact
  double operator()(double x) const { return depth < 0 ? cantor_exact(x) : cantor_staircase(x, depth); }
  double slope(double x) const { return depth < 0 ? 0.0 : cantor_staircase_slope(x, depth); }
  std::string tag() const { return depth < 0 ? "exact" : std::to_string(depth); }
};

}  // namespace detail

/// Names accepted by make_builtin.
inline const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names{
      "const",       "plane",        "paraboloid", "cylinder_sq", "saddle",
      "step_x",      "cantor",       "cantor_sheet", "steiner_f1", "steiner_f2",
      "bvt_counterexample"};
  return names;
}

/// Builds a catalog field.  Catalog (default domain in brackets):
///   const(c)                 c                                  [0,1]^2
///   plane(al,be,ga)          al*x + be*y + ga                   [0,1]^2
///   paraboloid               x^2 + y^2                          [0,1]^2
///   cylinder_sq              x^2                                [0,1]^2
///   saddle                   (x - xm)(y - ym), domain centre    [0,1]^2
///   step_x(s)                0 for x <= s, 1 for x > s          [0,1]^2
///   cantor(k|exact)          phi(x)                             [0,1]^2
///   cantor_sheet(k|exact)    phi(x)                             [0,1]x[0,2]
///   steiner_f1([k|exact])    0 | phi(x-1) on x<=1 | x>=1        [0,2]^2
///   steiner_f2([k|exact])    phi(x) | 1                         [0,2]^2
///   bvt_counterexample       sin(1/x), 0 at x = 0               [0,1]^2
/// The step takes its left limit at the jump.  `domain` overrides the
/// default rectangle.
inline ScalarField make_builtin(const FieldDescriptor& d, std::optional<Domain> domain = {}) {
  using detail::expect_arity;
  using detail::numeric_arg;
  const std::string label = d.args.empty() ? d.name : to_string(d);
  const std::string& n = d.name;

  if (n == "const") {
    expect_arity(d, 1, 1);
    const double c = numeric_arg(d, 0);
    return ScalarField(
        domain.value_or(unit_square()), [c](double, double) { return c; }, Regularity::C1,
        GradFn([](double, double) { return Vec2{0.0, 0.0}; }), label);
  }
  if (n == "plane") {
    expect_arity(d, 3, 3);
    const double al = numeric_arg(d, 0), be = numeric_arg(d, 1), ga = numeric_arg(d, 2);
    return ScalarField(
        domain.value_or(unit_square()), [=](double x, double y) { return al * x + be * y + ga; },
        Regularity::C1, GradFn([=](double, double) { return Vec2{al, be}; }), label);
  }
  if (n == "paraboloid") {
    expect_arity(d, 0, 0);
    return ScalarField(
        domain.value_or(unit_square()), [](double x, double y) { return x * x + y * y; }, Regularity::C1,
        GradFn([](double x, double y) { return Vec2{2 * x, 2 * y}; }), label);
  }
  if (n == "cylinder_sq") {
    expect_arity(d, 0, 0);
    return ScalarField(
        domain.value_or(unit_square()), [](double x, double) { return x * x; }, Regularity::C1,
        GradFn([](double x, double) { return Vec2{2 * x, 0.0}; }), label);
  }
  if (n == "saddle") {
    expect_arity(d, 0, 0);
    const Domain dom = domain.value_or(unit_square());
    const Vec2 m = dom.center();
    return ScalarField(
        dom, [m](double x, double y) { return (x - m.x) * (y - m.y); }, Regularity::C1,
        GradFn([m](double x, double y) { return Vec2{y - m.y, x - m.x}; }), label);
  }
  if (n == "step_x") {
    expect_arity(d, 1, 1);
    const Domain dom = domain.value_or(unit_square());
    const double s = numeric_arg(d, 0);
    if (!(s > dom.a && s < dom.b))
      throw InvalidArgument("step_x: jump location " + d.args[0] + " must lie strictly inside the domain");
    return ScalarField(
        dom, [s](double x, double) { return x <= s ? 0.0 : 1.0; }, Regularity::Integrable,
        GradFn([](double, double) { return Vec2{0.0, 0.0}; }), label);
  }
  if (n == "cantor" || n == "cantor_sheet") {
    expect_arity(d, 1, 1);
    const detail::Cantor1D phi{detail::cantor_depth_arg(d, 0)};
    const Domain dflt = n == "cantor" ? unit_square() : Domain(0.0, 1.0, 0.0, 2.0);
    return ScalarField(
        domain.value_or(dflt), [phi](double x, double) { return phi(x); }, Regularity::Continuous,
        GradFn([phi](double x, double) { return Vec2{phi.slope(x), 0.0}; }), label);
  }
  if (n == "steiner_f1" || n == "steiner_f2") {
    expect_arity(d, 0, 1);
    const detail::Cantor1D phi{detail::cantor_depth_arg(d, 0)};
    const Domain dom = domain.value_or(Domain(0.0, 2.0, 0.0, 2.0));
    if (n == "steiner_f1")
      return ScalarField(
          dom, [phi](double x, double) { return x <= 1.0 ? 0.0 : phi(x - 1.0); }, Regularity::Continuous,
          GradFn([phi](double x, double) { return Vec2{x <= 1.0 ? 0.0 : phi.slope(x - 1.0), 0.0}; }),
          label);
    return ScalarField(
        dom, [phi](double x, double) { return x <= 1.0 ? phi(x) : 1.0; }, Regularity::Continuous,
        GradFn([phi](double x, double) { return Vec2{x <= 1.0 ? phi.slope(x) : 0.0, 0.0}; }), label);
  }
  if (n == "bvt_counterexample") {
    expect_arity(d, 0, 0);
    return ScalarField(
        domain.value_or(unit_square()), [](double x, double) { return x > 0.0 ? std::sin(1.0 / x) : 0.0; },
        Regularity::Integrable,
        GradFn([](double x, double) {
          return Vec2{x > 0.0 ? -std::cos(1.0 / x) / (x * x) : 0.0, 0.0};
        }),
        label);
  }
  throw InvalidArgument("unknown field '" + n + "'");
}

/// Parses a descriptor and builds the field.  `grid(path)` loads a grid
/// file; everything else goes to make_builtin.
inline ScalarField make_field(std::string_view descriptor, std::optional<Domain> domain = {}) {
  const FieldDescriptor d = parse_descriptor(descriptor);
  if (d.name == "grid") {
    detail::expect_arity(d, 1, 1);
    return load_grid_field(d.args[0]).to_field(to_string(d));
  }
  return make_builtin(d, domain);
}

/// Catalog instances used by the property suites and the acceptance gate.
inline std::vector<std::string> catalog_descriptors() {
  return {"const(1)",       "plane(1,2,0)",         "paraboloid",  "cylinder_sq",
          "saddle",         "step_x(0.5)",          "cantor(exact)", "cantor_sheet(exact)",
          "steiner_f1(exact)", "steiner_f2(exact)", "bvt_counterexample"};
}

// ---------------------------------------------------------------------------
// gradients

inline constexpr double kDefaultFdStep = 1e-5;

/// Finite-difference gradient regardless of any analytic gradient.
inline Vec2 fd_grad(const ScalarField& f, double x, double y, double h) {
  const Domain& dom = f.domain();
  auto partial = [&](double t, double lo, double hi, auto&& at) {
    if (t - h >= lo && t + h <= hi) return (at(t + h) - at(t - h)) / (2 * h);
    if (t - h < lo && t + 2 * h <= hi) return (-3 * at(t) + 4 * at(t + h) - at(t + 2 * h)) / (2 * h);
    if (t + h > hi && t - 2 * h >= lo) return (3 * at(t) - 4 * at(t - h) + at(t - 2 * h)) / (2 * h);
    throw InvalidArgument("finite-difference step larger than the domain");
  };
  const double gx = partial(x, dom.a, dom.b, [&](double s) { return f(s, y); });
  const double gy = partial(y, dom.c, dom.d, [&](double s) { return f(x, s); });
  return {gx, gy};
}

/// Gradient of f at (x,y): the analytic gradient when the field has one,
/// otherwise central differences with step h, switching to one-sided
/// second-order stencils within h of the boundary.
inline Vec2 eval_grad(const ScalarField& f, double x, double y, double h = kDefaultFdStep) {
  if (!(h > 0.0)) throw InvalidArgument("finite-difference step must be positive");
  const Domain& dom = f.domain();
  if (!dom.contains(x, y)) throw DomainError("eval_grad: point outside the field domain");
  if (f.has_grad()) return f.grad(x, y);
  return fd_grad(f, x, y, h);
}

}  // namespace surfarea
