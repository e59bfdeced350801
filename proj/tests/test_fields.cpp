#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "surfarea/cantor.hpp"
#include "surfarea/fields.hpp"
#include "test_support.hpp"

using namespace surfarea;
using surfarea::testing::Rng;

TEST(Catalog, BasicEvaluations) {
  EXPECT_EQ(make_field("const(1)")(0.3, 0.9), 1.0);
  EXPECT_EQ(make_field("const(1)")(0.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(make_field("plane(1,2,0)")(0.5, 0.5), 1.5);
  EXPECT_DOUBLE_EQ(make_field("paraboloid")(0.5, 0.25), 0.3125);
  EXPECT_DOUBLE_EQ(make_field("cylinder_sq")(0.5, 0.9), 0.25);
  EXPECT_DOUBLE_EQ(make_field("saddle")(1.0, 1.0), 0.25);
}

TEST(Catalog, DomainsAndRegularity) {
  EXPECT_EQ(make_field("paraboloid").domain(), unit_square());
  EXPECT_EQ(make_field("cantor_sheet(exact)").domain(), Rect(0, 1, 0, 2));
  EXPECT_EQ(make_field("steiner_f1").domain(), Rect(0, 2, 0, 2));
  EXPECT_EQ(make_field("plane(1,2,0)").regularity(), Regularity::C1);
  EXPECT_EQ(make_field("cantor(exact)").regularity(), Regularity::Continuous);
  EXPECT_EQ(make_field("step_x(0.5)").regularity(), Regularity::Integrable);
  EXPECT_EQ(make_field("bvt_counterexample").regularity(), Regularity::Integrable);
  EXPECT_TRUE(make_field("paraboloid").has_grad());
  EXPECT_EQ(make_field("plane(1,2,0)", Rect(-1, 1, 2, 3)).domain(), Rect(-1, 1, 2, 3));
}

TEST(Catalog, StepTakesLeftLimitAtJump) {
  const ScalarField s = make_field("step_x(0.5)");
  EXPECT_EQ(s(0.5, 0.3), 0.0);
  EXPECT_EQ(s(std::nextafter(0.5, 1.0), 0.3), 1.0);
}

TEST(Catalog, SteinerPairValues) {
  const ScalarField f1 = make_field("steiner_f1(exact)"), f2 = make_field("steiner_f2(exact)");
  EXPECT_EQ(f1(0.7, 1.0), 0.0);
  // 1/3 is not a double; the Cantor function just left of it sits ~2^-35 below 1/2
  EXPECT_NEAR(f1(1.0 + 1.0 / 3.0, 0.2), 0.5, 1e-9);
  EXPECT_NEAR(f2(1.0 / 3.0, 1.5), 0.5, 1e-9);
  EXPECT_EQ(f2(0.5, 1.5), 0.5);
  EXPECT_EQ(f2(1.5, 0.0), 1.0);
}

TEST(Catalog, DescriptorErrors) {
  EXPECT_THROW(make_field("banana"), InvalidArgument);
  EXPECT_THROW(make_field("plane(1,2)"), InvalidArgument);
  EXPECT_THROW(make_field("const()"), InvalidArgument);
  EXPECT_THROW(make_field("const(abc)"), InvalidArgument);
  EXPECT_THROW(make_field("step_x(1.5)"), InvalidArgument);
  EXPECT_THROW(make_field("step_x(0)"), InvalidArgument);
  EXPECT_THROW(make_field("cantor(-1)"), InvalidArgument);
  EXPECT_THROW(make_field("cantor(fancy)"), InvalidArgument);
  EXPECT_THROW(make_field("plane(1,2,0"), ParseError);
}

TEST(Catalog, DescriptorGrammar) {
  const FieldDescriptor d = parse_descriptor(" plane( 1, 2 ,0) ");
  EXPECT_EQ(d.name, "plane");
  ASSERT_EQ(d.args.size(), 3u);
  EXPECT_EQ(d.args[1], "2");
  EXPECT_EQ(to_string(d), "plane(1,2,0)");
  EXPECT_TRUE(parse_descriptor("paraboloid").args.empty());
  EXPECT_TRUE(parse_descriptor("paraboloid()").args.empty());
  EXPECT_EQ(parse_descriptor("cantor(exact)").args.at(0), "exact");
  for (const std::string& desc : catalog_descriptors()) EXPECT_NO_THROW(make_field(desc)) << desc;
}

TEST(Cantor, Examples) {
  EXPECT_EQ(cantor_exact(0.0), 0.0);
  EXPECT_EQ(cantor_exact(1.0), 1.0);
  EXPECT_EQ(cantor_exact(1.0 / 3.0), 0.5);
  EXPECT_EQ(cantor_exact(2.0 / 3.0), 0.5);
  EXPECT_NEAR(cantor_exact(0.25), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(cantor_exact(0.75), 2.0 / 3.0, 1e-15);
  EXPECT_EQ(cantor_exact(0.5), 0.5);
  EXPECT_NEAR(cantor_exact(1.0 / 9.0), 0.25, 1e-15);
}

TEST(Cantor, StaircaseApproximantsConvergeAtRateTwoToMinusK) {
  Rng rng(11);
  for (int i = 0; i < 10000; ++i) {
    const double x = rng.uniform();
    const double phi = cantor_exact(x);
    for (int k = 0; k <= 20; ++k) ASSERT_LE(std::abs(cantor_staircase(x, k) - phi), std::ldexp(1.0, -k) + 1e-15);
  }
}

TEST(Cantor, MonotoneSymmetricProperty) {
  Rng rng(12);
  std::vector<double> xs(10000);
  for (double& x : xs) x = rng.uniform();
  for (double x : xs) EXPECT_NEAR(cantor_exact(x) + cantor_exact(1.0 - x), 1.0, 1e-12);
  std::sort(xs.begin(), xs.end());
  for (std::size_t i = 1; i < xs.size(); ++i) EXPECT_LE(cantor_exact(xs[i - 1]), cantor_exact(xs[i]));
}

TEST(Cantor, StaircaseSlopeIntegratesToOne) {
  for (int k : {0, 1, 3, 6}) {
    // Slope is piecewise constant on 3^-k cells; midpoint sampling is exact.
    const int cells = static_cast<int>(std::pow(3, k));
    double s = 0.0;
    for (int i = 0; i < cells; ++i) s += cantor_staircase_slope((i + 0.5) / cells, k) / cells;
    EXPECT_NEAR(s, 1.0, 1e-12) << k;
  }
}

TEST(Gradient, Examples) {
  const ScalarField plane = make_field("plane(1,2,0)");
  const Vec2 g = eval_grad(plane, 0.3, 0.7);
  EXPECT_EQ(g.x, 1.0);
  EXPECT_EQ(g.y, 2.0);
  const Vec2 p = eval_grad(make_field("paraboloid"), 0.5, 0.5);
  EXPECT_NEAR(p.x, 1.0, 1e-8);
  EXPECT_NEAR(p.y, 1.0, 1e-8);
}

TEST(Gradient, GridSampledPlane) {
  const ScalarField plane = make_field("plane(1,2,0)");
  const ScalarField g = GridField::sample(unit_square(), 9, 9, plane).to_field();
  EXPECT_FALSE(g.has_grad());
  for (Vec2 at : {Vec2{0.5, 0.5}, Vec2{0.0, 0.0}, Vec2{1.0, 0.3}, Vec2{0.99995, 1.0}, Vec2{0.123, 0.877}}) {
    const Vec2 d = eval_grad(g, at.x, at.y, 1e-4);
    EXPECT_NEAR(d.x, 1.0, 1e-6) << at.x << ',' << at.y;
    EXPECT_NEAR(d.y, 2.0, 1e-6) << at.x << ',' << at.y;
  }
}

TEST(Gradient, FiniteDifferencesMatchAnalyticOnC1Catalog) {
  Rng rng(13);
  const double h = kDefaultFdStep;
  for (const char* desc : {"plane(1,2,0)", "paraboloid", "cylinder_sq", "saddle", "const(1)"}) {
    const ScalarField f = make_field(desc);
    ASSERT_EQ(f.regularity(), Regularity::C1);
    for (int i = 0; i < 1000; ++i) {
      const double x = rng.uniform(), y = rng.uniform();
      const Vec2 a = f.grad(x, y), d = fd_grad(f, x, y, h);
      EXPECT_NEAR(d.x, a.x, 10 * h * h) << desc;
      EXPECT_NEAR(d.y, a.y, 10 * h * h) << desc;
    }
  }
}

TEST(Gradient, Errors) {
  const ScalarField f = make_field("paraboloid");
  EXPECT_THROW(eval_grad(f, 1.5, 0.5), DomainError);
  EXPECT_THROW(eval_grad(f.renamed("p"), 0.5, -0.1), DomainError);
  const ScalarField g = GridField::sample(unit_square(), 3, 3, f).to_field();
  EXPECT_THROW(eval_grad(g, 0.5, 0.5, 0.0), InvalidArgument);
}

TEST(GridField, ExactAtNodesAndReproducesAffineFields) {
  Rng rng(14);
  for (int trial = 0; trial < 50; ++trial) {
    const double a = rng.uniform(-2, 2), c = rng.uniform(-2, 2);
    const Rect dom(a, a + rng.uniform(0.1, 3), c, c + rng.uniform(0.1, 3));
    const double al = rng.uniform(-5, 5), be = rng.uniform(-5, 5), ga = rng.uniform(-5, 5);
    auto plane = [&](double x, double y) { return al * x + be * y + ga; };
    const int nx = rng.integer(2, 12), ny = rng.integer(2, 12);
    const GridField g = GridField::sample(dom, nx, ny, plane);
    for (int i = 0; i < 200; ++i) {
      const double x = rng.uniform(dom.a, dom.b), y = rng.uniform(dom.c, dom.d);
      ASSERT_NEAR(g(x, y), plane(x, y), 1e-12);
    }
    EXPECT_NEAR(g(dom.b, dom.d), plane(dom.b, dom.d), 1e-12);
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
        EXPECT_EQ(g(GridField::node_coord(dom.a, dom.b, i, nx), GridField::node_coord(dom.c, dom.d, j, ny)),
                  g.node(i, j));
  }
}

TEST(GridField, FileRoundTrip) {
  const GridField g = GridField::sample(Rect(0, 2, -1, 1), 4, 3, [](double x, double y) { return x * y + 0.1; });
  std::stringstream ss;
  write_grid_field(ss, g);
  const GridField back = parse_grid_field(ss);
  EXPECT_EQ(back.nx(), 4);
  EXPECT_EQ(back.ny(), 3);
  EXPECT_EQ(back.domain(), g.domain());
  EXPECT_EQ(back.values(), g.values());
}

TEST(GridField, ValuesOutsideAnyRangeAreAccepted) {
  std::istringstream in("2 2 0 1 0 1\n-1e300 5e7\n0 1e-300\n");
  const GridField g = parse_grid_field(in);
  EXPECT_EQ(g.node(0, 0), -1e300);
}

namespace {

void expect_parse_error(const std::string& text, std::size_t line, std::size_t column) {
  std::istringstream in(text);
  try {
    parse_grid_field(in, "t.grid");
    ADD_FAILURE() << "no error for:\n" << text;
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), line) << e.what();
    EXPECT_EQ(e.column(), column) << e.what();
    EXPECT_NE(std::string(e.what()).find("t.grid"), std::string::npos);
  }
}

}  // namespace

TEST(GridField, ParseErrorsReportLineAndColumn) {
  expect_parse_error("2 2 0 1 0 1\n1 2\n3 x4\n", 3, 3);
  expect_parse_error("2 2 0 1 0 1\n1 2\n3\n", 3, 2);
  expect_parse_error("2 2 0 1 0 1\n1 2\n3 4 5\n", 3, 5);
  expect_parse_error("2 2 0 1\n1 2 3 4\n", 1, 8);
  expect_parse_error("1 2 0 1 0 1\n1 2\n", 1, 1);
  expect_parse_error("2 2 1 0 0 1\n1 2 3 4\n", 1, 5);
  expect_parse_error("2 2 0 1 0 1 7\n1 2 3 4\n", 1, 13);
  expect_parse_error("2 2 0 one 0 1\n1 2 3 4\n", 1, 7);
  expect_parse_error("", 1, 1);
}

TEST(GridField, LoadMissingFileFails) {
  EXPECT_THROW(load_grid_field("/nonexistent/file.grid"), Error);
  EXPECT_THROW(make_field("grid(/nonexistent/file.grid)"), Error);
}

TEST(Combinators, MidpointAndDifference) {
  const ScalarField a = make_field("plane(1,0,0)"), b = make_field("plane(-1,0,0)");
  const ScalarField m = midpoint(a, b);
  EXPECT_EQ(m(0.7, 0.2), 0.0);
  EXPECT_EQ(m.regularity(), Regularity::C1);
  EXPECT_EQ(m.grad(0.1, 0.1).x, 0.0);
  const ScalarField d = difference(a, make_field("step_x(0.5)"));
  EXPECT_EQ(d.regularity(), Regularity::Integrable);
  EXPECT_DOUBLE_EQ(d(0.75, 0.0), -0.25);
  EXPECT_EQ(weaker(Regularity::C1, Regularity::Continuous), Regularity::Continuous);
}

TEST(Fields, ConcurrentEvaluationIsSafe) {
  const ScalarField f = make_field("cantor_sheet(exact)");
  std::vector<double> out(64);
  parallel_for(out.size(), 4, [&](std::size_t i) {
    double s = 0.0;
    for (int k = 0; k < 1000; ++k) s += f(k / 1000.0, 0.5);
    out[i] = s;
  });
  for (double v : out) EXPECT_EQ(v, out[0]);
}
