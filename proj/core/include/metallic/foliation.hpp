#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "metallic/structure.hpp"

namespace metallic {

/// Verdicts for one distribution. For D the projection defect is
/// ||P'(B(PX,PY))|| and the eigencondition uses sigma_-; for D' the roles of
/// P, P' and sigma_-, sigma_+ swap. B is the Lie bracket (integrability) or
/// the Jordan bracket {X,Y} = nabla_X Y + nabla_Y X (geodesic invariance).
struct DistributionVerdict {
  int rank = 0;
  double projection_defect = 0;  // Frobenius / Jordan projection
  double eigen_defect = 0;       // ||J T - sigma T|| with T = N_J or M_J
  double remark_defect = 0;      // (nabla_X J)Y -/+ (nabla_Y J)X on frame fields
  bool projection_ok = false;
  bool eigen_ok = false;
  bool remark_ok = false;

  bool agree() const { return projection_ok == eigen_ok && eigen_ok == remark_ok; }
  bool holds() const { return projection_ok && eigen_ok && remark_ok; }
};

struct FoliationReport {
  DistributionVerdict d;
  DistributionVerdict dp;
  std::size_t samples = 0;
  double tolerance = 1e-7;

  const DistributionVerdict& side(Side s) const { return s == Side::D ? d : dp; }
};

FoliationReport integrability_report(const Structure& s, const std::vector<Point>& samples,
                                     double tol = 1e-7);
FoliationReport geodesic_invariance_report(const Structure& s, const std::vector<Point>& samples,
                                           double tol = 1e-7);

/// Projection residual allowed for a field to count as lying in a distribution.
inline constexpr double kMembershipTolerance = 1e-7;

/// Throws PreconditionError when the field leaves the distribution at pt.
void require_in(const Structure& s, Side side, const VectorField& x, std::span<const double> pt);

/// nabla^D_X Y = P(nabla_X Y) (P' for D'), over the Levi-Civita connection.
Connection induced_connection(const Structure& s, Side side);

/// [X,Y]_D = P[X,Y].
VectorField bracket_d(const Structure& s, Side side, const VectorField& x, const VectorField& y);

struct InducedTorsion {
  Vec lie;        // nabla^D_X Y - nabla^D_Y X - [X,Y]
  Vec bracket_d;  // nabla^D_X Y - nabla^D_Y X - [X,Y]_D
};

InducedTorsion induced_torsion(const Structure& s, Side side, const VectorField& x,
                               const VectorField& y, std::span<const double> pt);

/// (nabla^D_X g)(Y,Z).
double induced_metricity(const Structure& s, Side side, const VectorField& x, const VectorField& y,
                         const VectorField& z, std::span<const double> pt);

/// [X,[Y,Z]_D]_D + [Y,[Z,X]_D]_D + [Z,[X,Y]_D]_D.
Vec jacobiator_d(const Structure& s, Side side, const VectorField& x, const VectorField& y,
                 const VectorField& z, std::span<const double> pt);

/// h(X,Y) = P'(nabla_X Y) for D (P(nabla_X Y) for D').
Vec second_fundamental_form(const Structure& s, Side side, const VectorField& x,
                            const VectorField& y, std::span<const double> pt);

/// Pointwise extrinsic and intrinsic data of a distribution. Frame-coordinate
/// vectors u in R^n stand for the tangent vector frame * u.
class LeafGeometry {
 public:
  /// Uses a g-orthonormal frame built from `frame` (columns spanning the
  /// distribution at pt) or, when empty, from the projector's range. Throws
  /// PreconditionError when g restricted to the distribution is not positive
  /// definite or the columns leave the distribution.
  LeafGeometry(const Structure& s, Side side, std::span<const double> pt, const Mat& frame = Mat());

  int ambient_dim() const { return m_; }
  int rank() const { return n_; }
  /// m x n, g-orthonormal columns.
  const Mat& frame() const { return e_; }
  const Point& point() const { return pt_; }

  /// h for ambient vectors in the distribution.
  Vec h(const Vec& x, const Vec& y) const;
  /// h(e_a, e_b).
  const Vec& h_frame(int a, int b) const { return hf_[static_cast<std::size_t>(a * n_ + b)]; }
  /// max ||h(e_a,e_b) - h(e_b,e_a)||.
  double h_asymmetry() const;

  /// R^M(X,Y,Z,W) - g(h(X,Z),h(Y,W)) + g(h(X,W),h(Y,Z)) for ambient vectors.
  double gauss(const Vec& x, const Vec& y, const Vec& z, const Vec& w) const;
  /// The same in frame coordinates, R^D_{abcd}.
  double rd(int a, int b, int c, int d) const {
    return rd_[static_cast<std::size_t>(((a * n_ + b) * n_ + c) * n_ + d)];
  }
  /// R^D(u,v,v,u) for orthonormal frame-coordinate vectors u, v.
  double sectional(const Vec& u, const Vec& v) const;

  Vec mean_curvature() const;
  double inner(const Vec& a, const Vec& b) const { return a.dot(g_ * b); }
  double h_norm_sq() const;
  /// sum_{a<b} K(e_a, e_b).
  double scalar_curvature() const;

 private:
  int m_ = 0;
  int n_ = 0;
  Point pt_;
  Mat g_;
  Mat e_;
  Mat proj_;
  std::vector<Vec> hc_;  // h(P d_i, P d_j), m*m entries
  std::vector<Vec> hf_;
  std::vector<double> rm_;  // ambient R_{abcd}
  std::vector<double> rd_;

  double rm(const Vec& x, const Vec& y, const Vec& z, const Vec& w) const;
};

struct MeanCurvature {
  Vec H;
  double norm_sq = 0;
};

MeanCurvature mean_curvature(const Structure& s, std::span<const double> pt, Side side = Side::D,
                             const Mat& frame = Mat());

struct GaussValue {
  double value = 0;
  double h_asymmetry = 0;
  bool integrable = true;  // h symmetric within the membership tolerance
};

GaussValue gauss_rd(const Structure& s, const VectorField& x, const VectorField& y,
                    const VectorField& z, const VectorField& w, std::span<const double> pt,
                    Side side = Side::D);

struct SectionalMinimum {
  double value = 0;
  Mat plane;             // ambient m x 2, g-orthonormal
  double sampled_min = 0;
  std::size_t sampled_planes = 0;
  bool certified = false;  // optimum within 1e-4 of the sampled minimum
  int starts = 0;
};

inline constexpr int kSectionalStarts = 32;
inline constexpr std::size_t kSectionalSamples = 100000;

/// Infimum of the sectional curvature of the distribution at pt over 2-planes,
/// by multi-start projected gradient descent on orthonormal pairs.
SectionalMinimum inf_sectional(const LeafGeometry& leaf,
                               std::size_t certify_samples = kSectionalSamples);
SectionalMinimum inf_sectional(const Structure& s, std::span<const double> pt);

struct ChenReport {
  Point point;
  int n = 0;
  Mat frame;
  double tau = 0;
  SectionalMinimum inf_k;
  double delta = 0;
  double h_mean_sq = 0;
  double h_norm_sq = 0;
  double a = 0, b = 0, c = 0;
  double constraint_residual = 0;  // q a^2 - p a b - b^2 - 1
  double e3_residual = 0;          // max |R^M - c[g(X,FW)g(Y,FZ) - g(X,FZ)g(Y,FW)]|
  double two_tau_residual = 0;     // 2 tau - [c(a s_- + b)^2 n(n-1) - |h|^2 + n^2 |H|^2]
  double h_asymmetry = 0;
  double lhs = 0;
  double rhs = 0;
  bool holds = false;
  std::vector<std::string> flags;  // violated hypotheses
};

ChenReport chen_report(const Structure& s, double a, double b, double c,
                       std::span<const double> pt, double tol = 1e-9);

/// A map between charts given by its target-coordinate components.
struct MapSpec {
  int source_dim = 0;
  std::vector<Expr> components;

  static MapSpec parse(const std::vector<std::string>& components, int source_dim);
  static MapSpec identity(int n);

  int target_dim() const { return static_cast<int>(components.size()); }
  Point apply(std::span<const double> pt) const;
  Mat jacobian(std::span<const double> pt) const;
};

struct MapReport {
  std::size_t samples = 0;
  double metallic_residual = 0;                // ||dPhi J1 - J2(Phi) dPhi||
  std::array<double, 2> odd_power_residual{};  // J^3, J^5
  double containment_residual = 0;             // part of L(TM1) outside ker dPhi
};

MapReport metallic_map_report(const MapSpec& phi, const EndoField& j1, const EndoField& j2,
                              const MetallicParams& params1, const MetallicParams& params2,
                              const std::vector<Point>& samples);

struct LeafCorrespondence {
  std::size_t samples = 0;
  int kernel_dim = -1;
  bool rank_varies = false;
  /// distance(ker dPhi, (J1 - s2_- I)(ker(J1 - s1_- I)))
  double condition_distance = 0;
  /// The same with sigma_+ in both places, as printed.
  double condition_printed_distance = 0;
  /// distance({v : (J1 - s2_- I)v in ker dPhi}, D1)
  double pullback_distance = 0;
  /// distance({v : (J1 - s2_+ I)v in ker dPhi}, D1)
  double pullback_printed_distance = 0;
  /// distance({v : dPhi v in D2}, D1), when J2 is given.
  double direct_distance = -1;
  double tolerance = 1e-7;

  bool condition_holds() const { return condition_distance < tolerance; }
  bool condition_printed_holds() const { return condition_printed_distance < tolerance; }
  bool pullback_is_d1() const { return pullback_distance < tolerance; }
};

LeafCorrespondence leaf_correspondence_check(const MapSpec& phi, const EndoField& j1,
                                             const MetallicParams& params1,
                                             const MetallicParams& params2,
                                             const std::vector<Point>& samples,
                                             const EndoField* j2 = nullptr);

}  // namespace metallic
