#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "metallic/calculus.hpp"
#include "metallic/errors.hpp"

using namespace metallic;
using fixtures::Gen;

namespace {

VectorField d(int n, int i) { return VectorField::coordinate(n, i); }

// Central-difference Christoffels as an independent oracle.
double fd_gamma(const MetricField& g, int k, int i, int j, Point pt) {
  const int n = g.dim();
  const double h = 1e-5;
  auto dg = [&](int a, int b, int c) {
    Point p = pt, m = pt;
    p[static_cast<std::size_t>(c)] += h;
    m[static_cast<std::size_t>(c)] -= h;
    return (eval(g(a, b), p) - eval(g(a, b), m)) / (2 * h);
  };
  const Mat inv = g.at(pt).inverse();
  double s = 0;
  for (int l = 0; l < n; ++l) s += 0.5 * inv(k, l) * (dg(j, l, i) + dg(i, l, j) - dg(i, j, l));
  return s;
}

}  // namespace

TEST(Christoffel, FlatMetricsVanish) {
  for (const auto& f : {fixtures::f1(), fixtures::f4()})
    for (double v : christoffel(f.s.g, Point{0.3, -0.7})) EXPECT_EQ(v, 0.0);
}

TEST(Christoffel, PolarMetric) {
  const MetricField g = MetricField::parse({{"1", "0"}, {"0", "x1^2"}}, 2);
  const Christoffel gamma = Christoffel::of(g);
  const Point pt{2, 0.5};
  EXPECT_NEAR(eval(gamma(0, 1, 1), pt), -2.0, 1e-12);
  EXPECT_NEAR(eval(gamma(1, 0, 1), pt), 0.5, 1e-12);
  EXPECT_NEAR(eval(gamma(1, 1, 0), pt), 0.5, 1e-12);
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        EXPECT_NEAR(eval(gamma(k, i, j), pt), fd_gamma(g, k, i, j, pt), 1e-7);
}

TEST(Christoffel, MatchesFiniteDifferenceOnCurvedMetric) {
  const MetricField g =
      MetricField::parse({{"1 + x2^2", "x1*x2"}, {"x1*x2", "2 + sin(x1)"}}, 2);
  const Point pt{0.4, -0.3};
  const auto gam = christoffel(g, pt);
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        EXPECT_NEAR(gam[static_cast<std::size_t>((k * 2 + i) * 2 + j)], fd_gamma(g, k, i, j, pt), 1e-7);
}

TEST(Christoffel, DegenerateMetricThrows) {
  const MetricField g = MetricField::parse({{"x1", "0"}, {"0", "1"}}, 2);
  EXPECT_THROW(christoffel(g, Point{0.0, 1.0}), DegenerateMetricError);
}

TEST(LieBracket, Examples) {
  const VectorField z = lie_bracket(d(2, 0), d(2, 1));
  EXPECT_TRUE(z[0].is_zero() && z[1].is_zero());
  const VectorField x{{Expr(0.0), Expr::coord(0)}};
  const Vec v = lie_bracket(x, d(2, 0)).at(Point{0.7, 0.1});
  EXPECT_NEAR(v(0), 0, 1e-15);
  EXPECT_NEAR(v(1), -1, 1e-15);
}

TEST(LieBracket, JacobiAndAntisymmetry) {
  Gen gen(7);
  for (int t = 0; t < 10; ++t) {
    const VectorField a = gen.field(3), b = gen.field(3), c = gen.field(3);
    const Point pt = gen.point({-1, -1, -1}, {1, 1, 1});
    const Vec jac = (lie_bracket(a, lie_bracket(b, c)) + lie_bracket(b, lie_bracket(c, a)) +
                     lie_bracket(c, lie_bracket(a, b)))
                        .at(pt);
    EXPECT_LT(jac.norm(), 1e-9);
    EXPECT_LT((lie_bracket(a, b) + lie_bracket(b, a)).at(pt).norm(), 1e-12);
  }
}

TEST(LeviCivita, FlatExamples) {
  const Connection lc = levi_civita(fixtures::f1().s.g);
  const VectorField y{{Expr(0.0), Expr::coord(0)}};
  const Vec v = lc(d(2, 0), y).at(Point{1, 1});
  EXPECT_DOUBLE_EQ(v(0), 0);
  EXPECT_DOUBLE_EQ(v(1), 1);
  const Connection lc4 = levi_civita(fixtures::f4().s.g);
  const Vec w = lc4(VectorField::constant(Vec::Constant(2, 0.3)), VectorField::constant(Vec::Ones(2)))
                    .at(Point{0.2, 0.2});
  EXPECT_EQ(w.norm(), 0.0);
}

TEST(LeviCivita, TorsionFreeAndMetricOnFixtures) {
  Gen gen(11);
  const MetricField curved =
      MetricField::parse({{"1 + x2^2", "x1*x2", "0"}, {"x1*x2", "2 + sin(x1)", "0"}, {"0", "0", "exp(x3)"}}, 3);
  for (const MetricField& g : {fixtures::f6().s.g, fixtures::f7().s.g, curved}) {
    const int n = g.dim();
    const Connection lc = levi_civita(g);
    for (int t = 0; t < 20; ++t) {
      const VectorField x = gen.field(n), y = gen.field(n), z = gen.field(n);
      const Point pt = gen.point(Point(static_cast<std::size_t>(n), 0.2), Point(static_cast<std::size_t>(n), 1.0));
      EXPECT_LT(torsion(lc, x, y).at(pt).norm(), 1e-9);
      EXPECT_LT(std::abs(eval(nabla_metric(lc, g, x, y, z), pt)), 1e-9);
    }
  }
}

TEST(Connection, FunctionLinearAndLeibniz) {
  Gen gen(13);
  const MetricField g = MetricField::parse({{"1 + x2^2", "x1*x2"}, {"x1*x2", "2 + sin(x1)"}}, 2);
  const Connection lc = levi_civita(g);
  for (int t = 0; t < 20; ++t) {
    const VectorField x = gen.field(2), y = gen.field(2);
    const Expr f = gen.poly(2);
    const Point pt = gen.point({-0.5, -0.5}, {0.5, 0.5});
    const Vec lhs1 = lc(f * x, y).at(pt);
    const Vec rhs1 = eval(f, pt) * lc(x, y).at(pt);
    EXPECT_LT((lhs1 - rhs1).norm(), 1e-10 * (1 + rhs1.norm()));
    const Vec lhs2 = lc(x, f * y).at(pt);
    const Vec rhs2 = eval(directional(x, f), pt) * y.at(pt) + eval(f, pt) * lc(x, y).at(pt);
    EXPECT_LT((lhs2 - rhs2).norm(), 1e-10 * (1 + rhs2.norm()));
  }
}

TEST(CoefficientConnection, TorsionOfAsymmetricSymbols) {
  std::vector<Expr> gamma(8);
  gamma[(0 * 2 + 0) * 2 + 1] = Expr(1.0);  // Gamma^1_{12}
  const Connection c = coefficient_connection(Christoffel(2, gamma));
  const Vec t = torsion(c, d(2, 0), d(2, 1)).at(Point{0.3, 2.0});
  EXPECT_DOUBLE_EQ(t(0), 1.0);
  EXPECT_DOUBLE_EQ(t(1), 0.0);
  const Connection flat = coefficient_connection(Christoffel(2, std::vector<Expr>(8)));
  const VectorField y{{Expr::coord(1), Expr::coord(0) * Expr::coord(0)}};
  const Vec v = flat(d(2, 0), y).at(Point{1.5, 0});
  EXPECT_DOUBLE_EQ(v(0), 0);
  EXPECT_DOUBLE_EQ(v(1), 3.0);
}

TEST(CoefficientConnection, ChristoffelExpressionsReproduceLeviCivita) {
  const MetricField g = fixtures::f6().s.g;
  const Connection a = coefficient_connection(Christoffel::of(g));
  const Connection b = levi_civita(g);
  Gen gen(3);
  for (int t = 0; t < 10; ++t) {
    const VectorField x = gen.field(4), y = gen.field(4);
    const Point pt = gen.point(Point(4, 0.3), Point(4, 1.2));
    EXPECT_LT((a(x, y).at(pt) - b(x, y).at(pt)).norm(), 1e-10);
  }
}

TEST(NablaEndo, MatchesMatrixDerivative) {
  const auto f2 = fixtures::f2();
  const Vec v = nabla_endo(f2.s.lc, f2.s.J, d(2, 0), d(2, 1)).at(Point{0, 0});
  // J(x1) = 1/2 + [[c - 2s, s + 2c]/2 ...]; dJ/dx1 at 0 applied to e2
  const double h = 1e-6;
  const Vec e2 = Vec::Unit(2, 1);
  const Vec fd = (f2.s.J.at(Point{h, 0}) - f2.s.J.at(Point{-h, 0})) * e2 / (2 * h);
  EXPECT_LT((v - fd).norm(), 1e-8);
}

TEST(NablaMetric, FlatConnectionOnCurvedMetric) {
  const MetricField g = MetricField::parse({{"1", "0"}, {"0", "1 + x1^2"}}, 2);
  const Connection flat = coefficient_connection(Christoffel(2, std::vector<Expr>(8)));
  EXPECT_NEAR(eval(nabla_metric(flat, g, d(2, 0), d(2, 1), d(2, 1)), Point{0.8, 0}), 1.6, 1e-14);
}

TEST(Riemann, FlatFixturesVanish) {
  for (const auto& f : {fixtures::f1(), fixtures::f3(), fixtures::f6()}) {
    const RiemannTensor r(f.s.g, f.hi);
    const int n = r.dim();
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int e = 0; e < n; ++e) EXPECT_EQ(r(a, b, c, e), 0.0);
  }
}

TEST(Riemann, UnitSphere) {
  const MetricField g = MetricField::parse({{"1", "0"}, {"0", "sin(x1)^2"}}, 2);
  EXPECT_NEAR(sectional_curvature(g, d(2, 0), d(2, 1), Point{1.0, 0.3}), 1.0, 1e-8);
}

TEST(Riemann, HyperbolicPlane) {
  const MetricField g = MetricField::parse({{"1/x2^2", "0"}, {"0", "1/x2^2"}}, 2);
  EXPECT_NEAR(sectional_curvature(g, d(2, 0), d(2, 1), Point{0.2, 1.7}), -1.0, 1e-9);
}

TEST(Riemann, SymmetriesAndBianchi) {
  const MetricField g = MetricField::parse(
      {{"1 + x2^2", "x1*x2", "0"}, {"x1*x2", "2 + sin(x1)", "x3/3"}, {"0", "x3/3", "exp(x1)"}}, 3);
  Gen gen(5);
  for (int t = 0; t < 5; ++t) {
    const Point pt = gen.point({0.1, 0.1, 0.1}, {0.6, 0.6, 0.6});
    const RiemannTensor r(g, pt);
    const Vec x = gen.vec(3), y = gen.vec(3), z = gen.vec(3), w = gen.vec(3);
    EXPECT_NEAR(r.apply(x, y, z, w) + r.apply(y, x, z, w), 0, 1e-9);
    EXPECT_NEAR(r.apply(x, y, z, w) + r.apply(x, y, w, z), 0, 1e-9);
    EXPECT_NEAR(r.apply(x, y, z, w) - r.apply(z, w, x, y), 0, 1e-9);
    EXPECT_NEAR(r.apply(x, y, z, w) + r.apply(y, z, x, w) + r.apply(z, x, y, w), 0, 1e-8);
  }
}

TEST(Riemann, MatchesConnectionDefinition) {
  const MetricField g = MetricField::parse({{"1", "0"}, {"0", "sin(x1)^2"}}, 2);
  const Connection lc = levi_civita(g);
  const VectorField x{{Expr::coord(1), Expr(1.0)}};
  const VectorField y{{Expr(1.0), Expr::coord(0)}};
  const VectorField z = d(2, 1), w{{Expr(0.5), Expr(2.0)}};
  const Point pt{1.1, 0.4};
  const VectorField rz = lc(x, lc(y, z)) - lc(y, lc(x, z)) - lc(lie_bracket(x, y), z);
  EXPECT_NEAR(eval(g.inner(rz, w), pt), riemann(g, x, y, z, w, pt), 1e-10);
}
