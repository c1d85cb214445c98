#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "metallic/errors.hpp"
#include "metallic/foliation.hpp"

using namespace metallic;

namespace {

VectorField d(int n, int i) { return VectorField::coordinate(n, i); }

EndoField P(const Structure& s) { return projector_fields(s.J, s.params).P; }

const double kSm = (1 - std::sqrt(5.0)) / 2;
const double kSp = (1 + std::sqrt(5.0)) / 2;

void expect_classified(const DistributionVerdict& v) {
  for (double x : {v.projection_defect, v.eigen_defect, v.remark_defect})
    EXPECT_TRUE(x < 1e-7 || x > 1e-3) << x;
  EXPECT_TRUE(v.agree());
}

}  // namespace

TEST(Integrability, ConstantGoldenBothSides) {
  const auto f = fixtures::f1();
  const auto r = integrability_report(f.s, f.samples(8));
  EXPECT_TRUE(r.d.holds());
  EXPECT_TRUE(r.dp.holds());
  EXPECT_LT(std::max({r.d.projection_defect, r.d.eigen_defect, r.d.remark_defect}), 1e-10);
  EXPECT_LT(std::max({r.dp.projection_defect, r.dp.eigen_defect, r.dp.remark_defect}), 1e-10);
}

TEST(Integrability, RotatingPlaneIsNotIntegrable) {
  const auto f = fixtures::f3();
  const auto r = integrability_report(f.s, {{0, 0, 0.2}});
  EXPECT_EQ(r.d.rank, 2);
  EXPECT_EQ(r.dp.rank, 1);
  EXPECT_GT(r.d.projection_defect, 0.1);
  EXPECT_GT(r.d.eigen_defect, 0.1);
  EXPECT_GT(r.d.remark_defect, 0.1);
  EXPECT_FALSE(r.d.holds());
  EXPECT_TRUE(r.dp.holds());
  expect_classified(r.d);
  expect_classified(r.dp);
}

TEST(Integrability, FrobeniusOracleOnRotatingPlane) {
  // D contains d3 and the sigma_- eigenvector u(x3) of the rotated block;
  // [u, d3] = -u'(x3), which is orthogonal to u and leaves D.
  const auto f = fixtures::f3();
  const Point pt{0, 0, 0.2};
  const Vec u = P(f.s).column(0).at(pt);
  const double h = 1e-6;
  const Vec du = (P(f.s).column(0).at(Point{0, 0, 0.2 + h}) - P(f.s).column(0).at(Point{0, 0, 0.2 - h})) / (2 * h);
  const Vec bracket = lie_bracket(P(f.s).column(0), d(3, 2)).at(pt);
  EXPECT_LT((bracket + du).norm(), 1e-6);
  const ProjectorPair pp = projectors(f.s.J, f.s.params, pt);
  EXPECT_GT((pp.Pp * bracket).norm(), 0.1);
  EXPECT_LT((pp.Pp * u).norm(), 1e-12);
}

TEST(Integrability, SphereFoliation) {
  const auto f = fixtures::f6();
  const auto r = integrability_report(f.s, f.samples(4));
  EXPECT_EQ(r.d.rank, 3);
  EXPECT_TRUE(r.d.holds());
  EXPECT_TRUE(r.dp.holds());
  EXPECT_LT(r.d.projection_defect, 1e-8);
  EXPECT_LT(r.dp.projection_defect, 1e-8);
}

TEST(Integrability, CharacterizationsAgreeOnFixtures) {
  for (const auto& f : {fixtures::f1(), fixtures::f2(), fixtures::f3(), fixtures::sphere3()}) {
    const auto r = integrability_report(f.s, f.samples(5, 3));
    expect_classified(r.d);
    expect_classified(r.dp);
    const auto g = geodesic_invariance_report(f.s, f.samples(5, 3));
    expect_classified(g.d);
    expect_classified(g.dp);
  }
}

TEST(Integrability, RequiresRealEigenvalues) {
  const auto f = fixtures::f4();
  EXPECT_THROW(integrability_report(f.s, f.samples(2)), PreconditionError);
  EXPECT_THROW(geodesic_invariance_report(f.s, f.samples(2)), PreconditionError);
}

TEST(GeodesicInvariance, ConstantGolden) {
  const auto f = fixtures::f1();
  const auto r = geodesic_invariance_report(f.s, f.samples(6));
  EXPECT_TRUE(r.d.holds());
  EXPECT_TRUE(r.dp.holds());
}

TEST(GeodesicInvariance, SpheresAccelerateRadiallyLinesDoNot) {
  const auto f = fixtures::f6();
  const auto r = geodesic_invariance_report(f.s, f.samples(4));
  EXPECT_FALSE(r.d.holds());
  EXPECT_GT(r.d.projection_defect, 0.1);
  EXPECT_GT(r.d.eigen_defect, 0.1);
  EXPECT_GT(r.d.remark_defect, 0.1);
  EXPECT_TRUE(r.dp.holds());
  EXPECT_LT(std::max({r.dp.projection_defect, r.dp.eigen_defect, r.dp.remark_defect}), 1e-9);
}

TEST(GeodesicInvariance, RadialPartOfJordanBracket) {
  // X = -x2 d1 + x1 d2 is tangent to the spheres; P'{X,X} = -2 g(X,X) x/|x|^2.
  const auto f = fixtures::f6();
  const VectorField x({-Expr::coord(1), Expr::coord(0), Expr(0.0), Expr(0.0)});
  const EndoField pp = projector_fields(f.s.J, f.s.params).Pp;
  for (const Point& pt : f.samples(5, 7)) {
    const Vec xp = Eigen::Map<const Vec>(pt.data(), 4);
    const Vec want = -2 * x.at(pt).squaredNorm() * xp / xp.squaredNorm();
    EXPECT_LT((pp.apply(jordan(f.s.lc, x, x)).at(pt) - want).norm(), 1e-10);
  }
}

TEST(InducedConnection, MetricOnSphereFrame) {
  const auto f = fixtures::f6();
  const Point pt = fixtures::f6_point(1);
  const EndoField p = P(f.s);
  for (int i = 1; i < 4; ++i)
    for (int j = 1; j < 4; ++j)
      for (int k = 1; k < 4; ++k)
        EXPECT_LT(std::abs(induced_metricity(f.s, Side::D, p.column(i), p.column(j), p.column(k), pt)),
                  1e-9);
}

TEST(InducedConnection, FlatOnConstantLine) {
  const auto f = fixtures::f1();
  const Connection nd = induced_connection(f.s, Side::D);
  const VectorField e = P(f.s).column(0);
  for (const Point& pt : f.samples(4)) EXPECT_LT(nd(e, e).at(pt).norm(), 1e-14);
  // A non-constant section: nabla^D_e (x1 e) = e(x1) e.
  const VectorField y = Expr::coord(0) * e;
  const Point pt{0.3, -0.2};
  const Vec ev = e.at(pt);
  EXPECT_LT((nd(e, y).at(pt) - ev(0) * ev).norm(), 1e-14);
}

TEST(InducedConnection, LieTorsionDetectsNonIntegrability) {
  const auto f = fixtures::f3();
  const Point pt{0, 0, 0.2};
  const EndoField p = P(f.s);
  const InducedTorsion t = induced_torsion(f.s, Side::D, p.column(0), p.column(2), pt);
  const ProjectorPair pp = projectors(f.s.J, f.s.params, pt);
  const Vec br = lie_bracket(p.column(0), p.column(2)).at(pt);
  EXPECT_GT(t.lie.norm(), 0.1);
  EXPECT_LT((t.lie + pp.Pp * br).norm(), 1e-12);
  // With [X,Y]_D = P[X,Y] the torsion of a projected torsion-free connection
  // is P(T(X,Y)) = 0 whatever the distribution.
  EXPECT_LT(t.bracket_d.norm(), 1e-12);
}

TEST(InducedConnection, TorsionFreeOnSpheres) {
  const auto f = fixtures::f6();
  const EndoField p = P(f.s);
  for (const Point& pt : f.samples(3)) {
    const InducedTorsion t = induced_torsion(f.s, Side::D, p.column(0), p.column(3), pt);
    EXPECT_LT(t.lie.norm(), 1e-9);
    EXPECT_LT(t.bracket_d.norm(), 1e-9);
  }
}

TEST(InducedConnection, RejectsFieldsOutsideDistribution) {
  const auto f = fixtures::f6();
  const Point pt = fixtures::f6_point(1);
  EXPECT_THROW(induced_torsion(f.s, Side::D, d(4, 0), d(4, 1), pt), PreconditionError);
  EXPECT_THROW(second_fundamental_form(f.s, Side::D, d(4, 1), d(4, 0), pt), PreconditionError);
  EXPECT_NO_THROW(second_fundamental_form(f.s, Side::DPrime, d(4, 0), d(4, 0), pt));
}

TEST(Jacobiator, VanishesOnIntegrableLeaves) {
  const auto f = fixtures::f6();
  const EndoField p = P(f.s);
  const Vec j = jacobiator_d(f.s, Side::D, p.column(1), p.column(2), p.column(3),
                             fixtures::f6_point(1));
  EXPECT_LT(j.norm(), 1e-8);
  const auto g = fixtures::f1();
  const VectorField e = P(g.s).column(0);
  EXPECT_LT(jacobiator_d(g.s, Side::D, e, Expr::coord(0) * e, Expr::coord(1) * e, Point{0.2, 0.4}).norm(),
            1e-12);
}

TEST(Jacobiator, NonzeroOnRotatingPlane) {
  const auto f = fixtures::f3();
  const EndoField p = P(f.s);
  const VectorField u = p.column(0), e3 = d(3, 2);
  const Vec j = jacobiator_d(f.s, Side::D, u, e3, Expr::coord(2) * u + Expr::coord(0) * e3,
                             Point{0.1, 0.3, 0.2});
  EXPECT_GT(j.norm(), 1e-3);
}

TEST(SecondFundamentalForm, UnitSphere) {
  const auto f = fixtures::f6();
  const VectorField x = P(f.s).column(1);
  const Vec h = second_fundamental_form(f.s, Side::D, x, x, fixtures::f6_point(1));
  EXPECT_LT((h - Vec::Unit(4, 0) * -1.0).norm(), 1e-12);
}

TEST(SecondFundamentalForm, ConstantLeavesAreTotallyGeodesic) {
  const auto f = fixtures::f1();
  const VectorField x = P(f.s).column(0);
  EXPECT_LT(second_fundamental_form(f.s, Side::D, x, Expr::coord(1) * x, Point{0.5, 0.1}).norm(), 1e-14);
}

TEST(SecondFundamentalForm, SymmetricIffIntegrable) {
  const auto a = fixtures::f3();
  const EndoField p = P(a.s);
  const Point pt{0, 0, 0.2};
  const Vec asym = second_fundamental_form(a.s, Side::D, p.column(0), p.column(2), pt) -
                   second_fundamental_form(a.s, Side::D, p.column(2), p.column(0), pt);
  EXPECT_GT(asym.norm(), 0.1);
  EXPECT_GT(LeafGeometry(a.s, Side::D, pt).h_asymmetry(), 0.1);
  const auto b = fixtures::f6();
  for (const Point& q : b.samples(3)) EXPECT_LT(LeafGeometry(b.s, Side::D, q).h_asymmetry(), 1e-9);
}

TEST(SecondFundamentalForm, TensorialInBothSlotsOnLeaves) {
  const auto f = fixtures::f6();
  const EndoField p = P(f.s);
  fixtures::Gen gen(11);
  for (const Point& pt : f.samples(3, 5)) {
    const Expr a = gen.poly(4), b = gen.poly(4);
    const Vec lhs = second_fundamental_form(f.s, Side::D, a * p.column(0), b * p.column(2), pt);
    const Vec rhs = eval(a, pt) * eval(b, pt) *
                    second_fundamental_form(f.s, Side::D, p.column(0), p.column(2), pt);
    EXPECT_LT(fixtures::rel_err(lhs, rhs), 1e-10);
  }
}

TEST(MeanCurvature, SphereScalesLikeInverseRadius) {
  const auto f = fixtures::f6();
  EXPECT_NEAR(mean_curvature(f.s, fixtures::f6_point(1)).norm_sq, 1.0, 1e-12);
  EXPECT_NEAR(mean_curvature(f.s, fixtures::f6_point(2)).norm_sq, 0.25, 1e-12);
  const auto g = fixtures::f1();
  EXPECT_LT(mean_curvature(g.s, Point{0.2, 0.3}).norm_sq, 1e-20);
}

TEST(MeanCurvature, IndependentOfFrame) {
  const auto f = fixtures::ellipsoids4();
  std::mt19937_64 rng(17);
  std::normal_distribution<double> nd;
  for (const Point& pt : f.samples(4)) {
    const LeafGeometry leaf(f.s, Side::D, pt);
    Mat r(3, 3);
    for (int i = 0; i < 9; ++i) r(i) = nd(rng);
    const Mat q = Eigen::HouseholderQR<Mat>(r).householderQ();
    const Mat rotated = leaf.frame() * q;
    const MeanCurvature a = mean_curvature(f.s, pt);
    const MeanCurvature b = mean_curvature(f.s, pt, Side::D, rotated);
    EXPECT_LT((a.H - b.H).norm(), 1e-10);
    // a non-orthonormal spanning set works as well
    const MeanCurvature c = mean_curvature(f.s, pt, Side::D, rotated * (2 * Mat::Identity(3, 3) + Mat::Ones(3, 3)));
    EXPECT_LT((a.H - c.H).norm(), 1e-10);
  }
}

TEST(MeanCurvature, NeedsPositiveDefiniteRestriction) {
  // On diag(1,-1) the sigma_- line (sigma_-, 1) of [[1,1],[1,0]] is timelike.
  const Structure s(MetricField::diagonal({Expr(1.0), Expr(-1.0)}),
                    EndoField::constant((Mat(2, 2) << 1, 1, 1, 0).finished()), {1, 1});
  EXPECT_THROW(mean_curvature(s, Point{0.1, 0.2}), PreconditionError);
}

TEST(Gauss, SphereSectionalCurvature) {
  const auto f = fixtures::f6();
  const EndoField p = P(f.s);
  for (double r : {1.0, 2.0}) {
    const GaussValue g =
        gauss_rd(f.s, p.column(1), p.column(2), p.column(2), p.column(1), fixtures::f6_point(r));
    EXPECT_NEAR(g.value, 1 / (r * r), 1e-12);
    EXPECT_TRUE(g.integrable);
  }
  const auto c = fixtures::f1();
  const VectorField e = P(c.s).column(0);
  EXPECT_NEAR(gauss_rd(c.s, e, e, e, e, Point{0.1, 0.1}).value, 0, 1e-14);
}

TEST(Gauss, FlagsNonIntegrable) {
  const auto f = fixtures::f3();
  const EndoField p = P(f.s);
  const GaussValue g = gauss_rd(f.s, p.column(0), p.column(2), p.column(2), p.column(0), Point{0, 0, 0.2});
  EXPECT_FALSE(g.integrable);
}

TEST(Gauss, AgreesWithSphereChart) {
  // Round sphere of radius r in hyperspherical coordinates (chi, theta, phi).
  for (double r : {1.0, 2.0}) {
    const Expr rr(r * r);
    const Expr s1 = sin(Expr::coord(0));
    const Expr s2 = sin(Expr::coord(1));
    const MetricField chart = MetricField::diagonal({rr, rr * s1 * s1, rr * s1 * s1 * s2 * s2});
    auto embed = [r](const Point& c) {
      return Vec((Vec(4) << r * std::cos(c[0]), r * std::sin(c[0]) * std::cos(c[1]),
                  r * std::sin(c[0]) * std::sin(c[1]) * std::cos(c[2]),
                  r * std::sin(c[0]) * std::sin(c[1]) * std::sin(c[2]))
                     .finished());
    };
    const auto f = fixtures::f6();
    for (const Point& c : {Point{0.7, 1.1, 0.4}, Point{1.3, 0.6, 2.0}}) {
      const Vec x = embed(c);
      Vec tangent[3];
      for (int i = 0; i < 3; ++i) {
        Point a = c, b = c;
        a[static_cast<std::size_t>(i)] += 1e-6;
        b[static_cast<std::size_t>(i)] -= 1e-6;
        tangent[i] = (embed(a) - embed(b)) / 2e-6;
      }
      const LeafGeometry leaf(f.s, Side::D, std::vector<double>(x.data(), x.data() + 4));
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
          const Vec& u = tangent[i];
          const Vec& v = tangent[j];
          const double k = leaf.gauss(u, v, v, u) / (u.squaredNorm() * v.squaredNorm() - std::pow(u.dot(v), 2));
          EXPECT_NEAR(k, sectional_curvature(chart, d(3, i), d(3, j), c), 1e-6);
        }
    }
  }
}

TEST(Chen, UnitSphereLeaves) {
  const auto f = fixtures::f6();
  const ChenReport r = chen_report(f.s, 1, 0, 0, fixtures::f6_point(1));
  EXPECT_EQ(r.n, 3);
  EXPECT_NEAR(r.tau, 3, 1e-10);
  EXPECT_NEAR(r.inf_k.value, 1, 1e-10);
  EXPECT_TRUE(r.inf_k.certified);
  EXPECT_NEAR(r.delta, 2, 1e-10);
  EXPECT_NEAR(r.h_mean_sq, 1, 1e-10);
  EXPECT_NEAR(r.rhs, 2.25, 1e-10);
  EXPECT_TRUE(r.holds);
  EXPECT_NEAR(r.constraint_residual, 0, 1e-15);
  EXPECT_LT(r.e3_residual, 1e-10);
  EXPECT_TRUE(r.flags.empty());
  EXPECT_NEAR(r.delta, r.tau - r.inf_k.value, 1e-15);
}

TEST(Chen, RadiusTwo) {
  const auto f = fixtures::f6();
  const ChenReport r = chen_report(f.s, 1, 0, 0, fixtures::f6_point(2));
  EXPECT_NEAR(r.delta, 0.5, 1e-10);
  EXPECT_NEAR(r.rhs, 0.5625, 1e-10);
  EXPECT_TRUE(r.holds);
}

TEST(Chen, TwoTauIdentityOnSamples) {
  for (const auto& f : {fixtures::f6(), fixtures::ellipsoids4()})
    for (const Point& pt : f.samples(4, 2)) {
      const ChenReport r = chen_report(f.s, 1, 0, 0, pt);
      EXPECT_LT(std::abs(r.two_tau_residual), 1e-7) << f.name;
      EXPECT_TRUE(r.holds) << f.name;
      EXPECT_LE(r.lhs, r.rhs + 1e-9);
    }
}

TEST(Chen, TwoDimensionalLeavesGiveEquality) {
  const auto f = fixtures::sphere3();
  for (const Point& pt : f.samples(3)) {
    const ChenReport r = chen_report(f.s, 1, 0, 0, pt);
    EXPECT_EQ(r.n, 2);
    EXPECT_NEAR(r.delta, 0, 1e-12);
    EXPECT_NEAR(r.inf_k.value, r.tau, 1e-12);
    EXPECT_NEAR(r.rhs, 0, 1e-12);
    EXPECT_TRUE(r.holds);
  }
}

TEST(Chen, HypothesisViolationsAreFlags) {
  const auto f = fixtures::f6();
  const ChenReport bad = chen_report(f.s, 2, 0, 0, fixtures::f6_point(1));
  EXPECT_NEAR(bad.constraint_residual, 3, 1e-15);
  EXPECT_FALSE(bad.flags.empty());
  // flat ambient space is not of the model form with c = 1
  const ChenReport curved = chen_report(f.s, 1, 0, 1, fixtures::f6_point(1));
  EXPECT_GT(curved.e3_residual, 0.1);
  EXPECT_FALSE(curved.flags.empty());
  const auto g = fixtures::f3();
  const ChenReport open = chen_report(g.s, 1, 0, 0, Point{0, 0, 0.2});
  EXPECT_GT(open.h_asymmetry, 0.1);
  EXPECT_FALSE(open.flags.empty());
}

TEST(InfSectional, IsotropicSphere) {
  const auto f = fixtures::f6();
  const SectionalMinimum m = inf_sectional(f.s, fixtures::f6_point(1));
  EXPECT_NEAR(m.value, 1, 1e-10);
  EXPECT_EQ(m.plane.cols(), 2);
  EXPECT_NEAR(std::abs(m.plane.col(0).dot(m.plane.col(1))), 0, 1e-12);
}

TEST(InfSectional, AnisotropicMatchesCurvatureOperator) {
  // For rank 3 every unit bivector is decomposable, so the infimum is the
  // smallest eigenvalue of the curvature operator on the bivectors.
  const auto f = fixtures::ellipsoids4();
  for (const Point& pt : f.samples(3, 9)) {
    const LeafGeometry leaf(f.s, Side::D, pt);
    const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
    Mat q(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        q(i, j) = leaf.rd(pairs[i][0], pairs[i][1], pairs[j][1], pairs[j][0]);
    const double oracle = Eigen::SelfAdjointEigenSolver<Mat>(q).eigenvalues().minCoeff();
    const SectionalMinimum m = inf_sectional(leaf);
    EXPECT_NEAR(m.value, oracle, 1e-8);
    EXPECT_TRUE(m.certified);
    EXPECT_LE(m.sampled_min - m.value, 1e-4);
    EXPECT_GE(m.sampled_min, m.value - 1e-9);
    double top = Eigen::SelfAdjointEigenSolver<Mat>(q).eigenvalues().maxCoeff();
    EXPECT_GT(top - oracle, 1e-3);  // genuinely anisotropic
  }
}

TEST(InfSectional, NeedsTwoDimensions) {
  const auto f = fixtures::f3();
  // D' of F3 is a line
  EXPECT_THROW(inf_sectional(LeafGeometry(f.s, Side::DPrime, Point{0, 0, 0.2})), PreconditionError);
}

TEST(MetallicMap, IdentityOnConstantGolden) {
  const auto f = fixtures::f1();
  const MapReport r = metallic_map_report(MapSpec::identity(2), f.s.J, f.s.J, f.s.params,
                                          f.s.params, f.samples(5));
  EXPECT_LT(r.metallic_residual, 1e-12);
  EXPECT_LT(r.odd_power_residual[0], 1e-12);
  EXPECT_LT(r.odd_power_residual[1], 1e-12);
  EXPECT_LT(r.containment_residual, 1e-12);
}

namespace {

// Coordinate along the sigma_+ eigenline of [[1,1],[1,0]], which is (sigma_+, 1).
MapSpec eigenline_projection() {
  const double n = std::sqrt(kSp * kSp + 1);
  return MapSpec{2, {Expr(kSp / n) * Expr::coord(0) + Expr(1 / n) * Expr::coord(1)}};
}

}  // namespace

TEST(MetallicMap, EigenlineProjection) {
  const auto f = fixtures::f1();
  const EndoField j2 = EndoField::constant(Mat::Constant(1, 1, kSp));
  const MapReport r =
      metallic_map_report(eigenline_projection(), f.s.J, j2, f.s.params, f.s.params, f.samples(5));
  EXPECT_LT(r.metallic_residual, 1e-9);
  EXPECT_LT(r.odd_power_residual[1], 1e-9);
  EXPECT_LT(r.containment_residual, 1e-12);
  const Mat d = eigenline_projection().jacobian(Point{0.1, 0.2});
  EXPECT_NEAR(d(0, 0) * kSm + d(0, 1), 0, 1e-12);  // ker dPhi = D
}

TEST(MetallicMap, NonMetallicMapIsDetected) {
  const auto f = fixtures::f1();
  const EndoField j2 = EndoField::constant(Mat::Constant(1, 1, kSp));
  const MapSpec first{2, {Expr::coord(0)}};
  EXPECT_GT(metallic_map_report(first, f.s.J, j2, f.s.params, f.s.params, f.samples(2)).metallic_residual,
            0.1);
}

TEST(MetallicMap, ContainmentAcrossDifferentParameters) {
  // J1 = diag(sigma_+, 2) solves t^2 = (sigma_+ + 2)t - 2 sigma_+; Phi = x1
  // intertwines it with the golden scalar sigma_+.
  const EndoField j1 = EndoField::constant((Mat(2, 2) << kSp, 0, 0, 2).finished());
  const MetallicParams p1{kSp + 2, -2 * kSp};
  const EndoField j2 = EndoField::constant(Mat::Constant(1, 1, kSp));
  const MapSpec phi{2, {Expr::coord(0)}};
  const std::vector<Point> pts{{0.1, 0.2}, {-0.4, 0.9}};
  const MapReport r = metallic_map_report(phi, j1, j2, p1, {1, 1}, pts);
  EXPECT_LT(r.metallic_residual, 1e-12);
  EXPECT_LT(r.odd_power_residual[0], 1e-9);
  EXPECT_LT(r.containment_residual, 1e-9);
  // the image of L is nonzero, so the check is not vacuous
  const double l_e2 = ((1 + 1) - (p1.p * p1.p + p1.q)) * 2 + (1 - p1.p * p1.q);
  EXPECT_GT(std::abs(l_e2), 0.1);
}

TEST(MetallicMap, ConstantMapIntoProductStructure) {
  const auto f = fixtures::f1();
  const EndoField j2 = EndoField::constant((Mat(2, 2) << 0, 1, 1, 0).finished());
  const MapSpec c{2, {Expr(0.5), Expr(-1.0)}};
  const MapReport r = metallic_map_report(c, f.s.J, j2, f.s.params, {0, 1}, f.samples(3));
  EXPECT_LT(r.metallic_residual, 1e-15);
  EXPECT_LT(r.containment_residual, 1e-15);
}

TEST(MetallicMap, JacobianMatchesFiniteDifferences) {
  const MapSpec m = MapSpec::parse({"x1*sin(x2)", "exp(x1) - x2^2", "x1*x2"}, 2);
  const Point pt{0.3, -0.7};
  const Mat jac = m.jacobian(pt);
  for (int i = 0; i < 2; ++i) {
    Point a = pt, b = pt;
    a[static_cast<std::size_t>(i)] += 1e-6;
    b[static_cast<std::size_t>(i)] -= 1e-6;
    const Point fa = m.apply(a), fb = m.apply(b);
    for (int k = 0; k < 3; ++k)
      EXPECT_NEAR(jac(k, i), (fa[static_cast<std::size_t>(k)] - fb[static_cast<std::size_t>(k)]) / 2e-6, 1e-6);
  }
}

TEST(MetallicMap, ShapeMismatch) {
  const auto f = fixtures::f1();
  EXPECT_THROW(metallic_map_report(MapSpec::identity(3), f.s.J, f.s.J, f.s.params, f.s.params,
                                   f.samples(1)),
               ShapeError);
}

TEST(LeafCorrespondence, EigenlineProjectionPullsBackD) {
  const auto f = fixtures::f1();
  const EndoField j2 = EndoField::constant(Mat::Constant(1, 1, kSp));
  const LeafCorrespondence r = leaf_correspondence_check(eigenline_projection(), f.s.J, f.s.params,
                                                         f.s.params, f.samples(4), &j2);
  EXPECT_EQ(r.kernel_dim, 1);
  EXPECT_FALSE(r.rank_varies);
  EXPECT_TRUE(r.pullback_is_d1());
  EXPECT_LT(r.direct_distance, 1e-7);
  // ker dPhi = D1 while (J1 - sigma I) kills D1 (or D1'), so neither form of
  // the sufficient condition holds here although the pull-back is D1.
  EXPECT_FALSE(r.condition_holds());
  EXPECT_FALSE(r.condition_printed_holds());
}

TEST(LeafCorrespondence, Identity) {
  const auto f = fixtures::f1();
  const LeafCorrespondence r = leaf_correspondence_check(MapSpec::identity(2), f.s.J, f.s.params,
                                                         f.s.params, f.samples(4), &f.s.J);
  EXPECT_EQ(r.kernel_dim, 0);
  EXPECT_TRUE(r.condition_holds());
  EXPECT_TRUE(r.pullback_is_d1());
  EXPECT_LT(r.direct_distance, 1e-7);
  // The printed pull-back {v : (J1 - s_+)v in ker} is D1', not D1.
  EXPECT_GT(r.pullback_printed_distance, 0.5);
}

TEST(LeafCorrespondence, ConstantMap) {
  const auto f = fixtures::f1();
  const MapSpec c{2, {Expr(1.0)}};
  const LeafCorrespondence r =
      leaf_correspondence_check(c, f.s.J, f.s.params, f.s.params, f.samples(3));
  EXPECT_EQ(r.kernel_dim, 2);
  EXPECT_FALSE(r.condition_holds());
  EXPECT_FALSE(r.pullback_is_d1());
}

TEST(LeafCorrespondence, ConditionImpliesPullback) {
  // Different parameters: (J1 - s2_-) is invertible on D1, so the condition
  // reads ker dPhi = D1 and the pull-back formula returns D1.
  fixtures::Gen gen(23);
  for (int k = 0; k < 10; ++k) {
    const MetallicParams p1{gen.uniform(0.2, 2), gen.uniform(0.2, 2)};
    const MetallicParams p2{gen.uniform(-1, 1), gen.uniform(0.5, 2)};
    const double sm = p1.sm(), sp = p1.sp();
    const EndoField j1 = EndoField::constant((Mat(3, 3) << sm, 0, 0, 0, sp, 1, 0, 0, sp).finished());
    const MapSpec phi{3, {Expr::coord(1), Expr::coord(2)}};
    const LeafCorrespondence r = leaf_correspondence_check(phi, j1, p1, p2, {{0.1, 0.2, 0.3}});
    EXPECT_TRUE(r.condition_holds());
    EXPECT_TRUE(r.pullback_is_d1());
  }
}
