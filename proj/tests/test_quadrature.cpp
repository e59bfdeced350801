#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "surfarea/quadrature.hpp"
#include "test_support.hpp"

using namespace surfarea;
using surfarea::testing::Rng;

namespace {

// sqrt(5)/2 + asinh(2)/4, closed-form antiderivative.
const double kArc = std::sqrt(5.0) / 2.0 + std::asinh(2.0) / 4.0;
// int_Q sqrt(1 + 4x^2 + 4y^2), confirmed at 64 and 128 panels and with mpmath.
constexpr double kParaboloidArea = 1.8615641807530909;

}  // namespace

TEST(Quadrature, ConstantIntegratesToOne) {
  for (int order = kMinGaussOrder; order <= kMaxGaussOrder; ++order)
    EXPECT_NEAR(integrate_line([](double) { return 1.0; }, 0.0, 1.0, 1, order), 1.0, 1e-15) << order;
}

TEST(Quadrature, SquareIsExactForEveryOrder) {
  for (int order = kMinGaussOrder; order <= kMaxGaussOrder; ++order)
    EXPECT_NEAR(integrate_line([](double x) { return x * x; }, 0.0, 1.0, 1, order), 1.0 / 3.0, 1e-14) << order;
}

TEST(Quadrature, ArcLengthOfParabola) {
  EXPECT_NEAR(kArc, 1.478942857544597, 1e-14);
  EXPECT_NEAR(integrate_line([](double x) { return std::sqrt(1 + 4 * x * x); }, 0.0, 1.0, 16, 8), kArc, 1e-12);
}

TEST(Quadrature, WeightsSumToTwoAndNodesAreSymmetric) {
  for (int order = kMinGaussOrder; order <= kMaxGaussOrder; ++order) {
    const GaussRule& r = gauss_rule(order);
    ASSERT_EQ(static_cast<int>(r.nodes.size()), order);
    double s = 0.0;
    for (double w : r.weights) s += w;
    EXPECT_NEAR(s, 2.0, 1e-14);
    for (int i = 0; i < order; ++i) EXPECT_NEAR(r.nodes[i], -r.nodes[order - 1 - i], 1e-15);
  }
}

TEST(Quadrature, PolynomialExactnessProperty) {
  Rng rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const int order = rng.integer(kMinGaussOrder, kMaxGaussOrder);
    const int degree = 2 * order - 1;
    std::vector<double> c(degree + 1);
    for (double& v : c) v = rng.uniform(-1, 1);
    const double a = rng.uniform(-1, 0), b = rng.uniform(0.1, 1.5);
    auto p = [&](double x) {
      double s = 0.0;
      for (int k = degree; k >= 0; --k) s = s * x + c[k];
      return s;
    };
    auto antider = [&](double x) {
      double s = 0.0;
      for (int k = degree; k >= 0; --k) s = s * x + c[k] / (k + 1);
      return s * x;
    };
    const double exact = antider(b) - antider(a);
    EXPECT_NEAR(integrate_line(p, a, b, 1, order), exact, 1e-12 * std::max(1.0, std::abs(exact)))
        << "order " << order;
  }
}

TEST(Quadrature, RectangleExamples) {
  const Rect q = unit_square();
  EXPECT_NEAR(integrate_rect([](double, double) { return 1.0; }, q, 1, 2), 1.0, 1e-15);
  EXPECT_NEAR(integrate_rect([](double x, double y) { return x * y; }, q, 1, 2), 0.25, 1e-14);
  auto para = [](double x, double y) { return std::sqrt(1 + 4 * x * x + 4 * y * y); };
  EXPECT_NEAR(integrate_rect(para, q, 64, 8), kParaboloidArea, 1e-13);
  EXPECT_NEAR(integrate_rect(para, q, 128, 8), kParaboloidArea, 1e-13);
}

TEST(Quadrature, ErrorAtLeastHalvesWhenPanelsDouble) {
  // Order 2 keeps the discretisation error above roundoff.
  struct Case {
    double (*g)(double);
    double exact;
  };
  const Case cases[] = {
      {[](double x) { return std::sqrt(1 + 4 * x * x); }, kArc},
      {[](double x) { return std::exp(x) * std::sin(3 * x); },
       (std::exp(1.0) * (std::sin(3.0) - 3 * std::cos(3.0)) + 3.0) / 10.0},
      {[](double x) { return x * x * x * x; }, 0.2},
  };
  for (const Case& c : cases) {
    double prev = std::abs(integrate_line(c.g, 0.0, 1.0, 1, 2) - c.exact);
    for (int p = 2; p <= 32; p *= 2) {
      const double err = std::abs(integrate_line(c.g, 0.0, 1.0, p, 2) - c.exact);
      EXPECT_LE(err, 0.5 * prev) << p;
      prev = err;
    }
  }
  // Tensor rule on the C1 catalog area integrands.
  auto para = [](double x, double y) { return std::sqrt(1 + 4 * x * x + 4 * y * y); };
  auto saddle = [](double x, double y) { return std::sqrt(1 + (y - .5) * (y - .5) + (x - .5) * (x - .5)); };
  for (auto f : {+para, +saddle}) {
    const double ref = integrate_rect(f, unit_square(), 128, 8);
    double prev = std::abs(integrate_rect(f, unit_square(), 1, 2) - ref);
    for (int p = 2; p <= 16; p *= 2) {
      const double err = std::abs(integrate_rect(f, unit_square(), p, 2) - ref);
      EXPECT_LE(err, 0.5 * prev) << p;
      prev = err;
    }
  }
}

TEST(Quadrature, AbsoluteValueSplitsAtSignChanges) {
  // A single order-2 panel over a kink would be badly wrong without splitting.
  EXPECT_NEAR(integrate_abs([](double x) { return x; }, -1.0, 2.0, 1, 2), 2.5, 1e-11);
  EXPECT_NEAR(integrate_abs([](double x) { return std::sin(x); }, 0.0, 3 * std::numbers::pi, 4, 8), 6.0, 1e-10);
  EXPECT_NEAR(integrate_abs([](double x) { return x - 0.5; }, 0.0, 1.0, 1, 8), 0.25, 1e-12);
  EXPECT_NEAR(integrate_abs([](double) { return -3.0; }, 0.0, 1.0, 2, 4), 3.0, 1e-15);
}

TEST(Quadrature, RejectsBadSpecs) {
  auto one = [](double) { return 1.0; };
  EXPECT_THROW(integrate_line(one, 0.0, 1.0, 0, 8), InvalidArgument);
  EXPECT_THROW(integrate_line(one, 0.0, 1.0, 4, 1), InvalidArgument);
  EXPECT_THROW(integrate_line(one, 0.0, 1.0, 4, 17), InvalidArgument);
  EXPECT_THROW(integrate_line(one, 1.0, 0.0, 4, 8), InvalidArgument);
  EXPECT_THROW(gauss_rule(1), InvalidArgument);
}
