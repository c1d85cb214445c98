#include "metallic/structure.hpp"

#include <algorithm>
#include <cmath>

#include "metallic/errors.hpp"
#include "metallic/linalg.hpp"

namespace metallic {

cplx MetallicParams::sigma_plus() const {
  return (cplx(p) + std::sqrt(cplx(disc()))) / 2.0;
}

cplx MetallicParams::sigma_minus() const {
  return (cplx(p) - std::sqrt(cplx(disc()))) / 2.0;
}

void MetallicParams::require_real() const {
  if (!(disc() > 0))
    throw PreconditionError("real projectors need p^2+4q > 0, got " + std::to_string(disc()));
}

double MetallicParams::sp() const {
  require_real();
  return (p + std::sqrt(disc())) / 2.0;
}

double MetallicParams::sm() const {
  require_real();
  return (p - std::sqrt(disc())) / 2.0;
}

double MetallicParams::root() const {
  require_real();
  return std::sqrt(disc());
}

Structure::Structure(MetricField g_, EndoField j_, MetallicParams params_)
    : g(std::move(g_)), J(std::move(j_)), params(params_), lc(levi_civita(g)) {
  if (g.dim() != J.dim()) throw ShapeError("metric and endomorphism dimensions differ");
}

bool ValidationReport::ok() const {
  return samples > 0 && metallic_residual < tolerance && symmetry_residual < tolerance &&
         signature_ok && skew_consistent;
}

ValidationReport validate(const MetricField& g, const EndoField& J, const MetallicParams& params,
                          const std::vector<Point>& samples, double tol) {
  if (g.dim() != J.dim()) throw ShapeError("metric and endomorphism dimensions differ");
  if (samples.empty()) throw PreconditionError("validation needs at least one sample point");
  const int n = J.dim();
  ValidationReport r;
  r.samples = samples.size();
  r.disc = params.disc();
  r.tolerance = tol;
  r.indefinite = true;
  r.definite = true;
  const Mat id = Mat::Identity(n, n);
  for (const Point& pt : samples) {
    if (static_cast<int>(pt.size()) != n) throw ShapeError("sample point dimension mismatch");
    Evaluator ev(pt);
    const Mat j = J.at(ev);
    const Mat gm = g.at(ev);
    const Mat gj = gm * j;
    r.metallic_residual = std::max(r.metallic_residual, (j * j - params.p * j - params.q * id).norm());
    r.symmetry_residual = std::max(r.symmetry_residual, (gj - gj.transpose()).norm());
    r.skew_residual = std::max(r.skew_residual, (gj + gj.transpose()).norm());
    r.j_norm = std::max(r.j_norm, j.norm());
    const Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (gm + gm.transpose()));
    const Vec ev_g = es.eigenvalues();
    const bool pos = (ev_g.array() > 0).any();
    const bool neg = (ev_g.array() < 0).any();
    r.indefinite = r.indefinite && pos && neg;
    r.definite = r.definite && !(pos && neg);
  }
  // a g-symmetric J has real eigenvalues when g is definite
  r.signature_ok = !(r.disc < 0 && !r.indefinite);
  r.skew = r.skew_residual < tol && r.j_norm > tol;
  r.skew_consistent = !r.skew || std::abs(params.p) < tol;
  return r;
}

ProjectorFields projector_fields(const EndoField& J, const MetallicParams& params) {
  const double s = params.root();
  const int n = J.dim();
  const EndoField id = EndoField::identity(n);
  return {Expr(1.0 / s) * (Expr(params.sp()) * id - J),
          Expr(1.0 / s) * (J - Expr(params.sm()) * id)};
}

ProjectorPair projectors(const EndoField& J, const MetallicParams& params,
                         std::span<const double> pt) {
  const double s = params.root();
  const Mat j = J.at(pt);
  const Mat id = Mat::Identity(j.rows(), j.cols());
  return {(params.sp() * id - j) / s, (j - params.sm() * id) / s};
}

DistributionFrame distribution_frame(const EndoField& J, const MetallicParams& params,
                                     std::span<const double> base) {
  DistributionFrame f;
  f.base.assign(base.begin(), base.end());
  f.proj = projector_fields(J, params);
  Evaluator ev(base);
  const Mat p = f.proj.P.at(ev);
  const Mat pp = f.proj.Pp.at(ev);
  f.d_columns = pivot_columns(p);
  f.dp_columns = pivot_columns(pp);
  std::sort(f.d_columns.begin(), f.d_columns.end());
  std::sort(f.dp_columns.begin(), f.dp_columns.end());
  for (int c : f.d_columns) f.d.push_back(f.proj.P.column(c));
  for (int c : f.dp_columns) f.dp.push_back(f.proj.Pp.column(c));
  return f;
}

const char* tensor_name(TensorKind k) {
  switch (k) {
    case TensorKind::JBracket: return "j_bracket";
    case TensorKind::Nijenhuis: return "nijenhuis";
    case TensorKind::JordanBracket: return "jordan_bracket";
    case TensorKind::JordanTensor: return "jordan_tensor";
    case TensorKind::DeformationHJ: return "deformation_hj";
  }
  return "?";
}

Vec assoc_tensor(TensorKind kind, const Structure& s, const VectorField& x, const VectorField& y,
                 std::span<const double> pt) {
  return assoc_tensor(kind, s.lc, s.J, x, y).at(pt);
}

DeformationSuite deformation_suite(const Structure& s, const VectorField& x, const VectorField& y,
                                   std::span<const double> pt) {
  const MetallicParams& mp = s.params;
  const double d = mp.disc();
  const double r = mp.root();
  const double sp = mp.sp();
  const double sm = mp.sm();
  const ProjectorFields pr = projector_fields(s.J, mp);
  const Connection& nabla = s.lc;
  const EndoField& J = s.J;

  auto h = [&](const VectorField& a, const VectorField& b) {
    return pr.Pp.apply(nabla(pr.P.apply(a), pr.P.apply(b)));
  };
  auto hp = [&](const VectorField& a, const VectorField& b) {
    return pr.P.apply(nabla(pr.Pp.apply(a), pr.Pp.apply(b)));
  };

  Evaluator ev(pt);
  DeformationSuite out;
  const Vec hxy = h(x, y).at(ev);
  const Vec hyx = h(y, x).at(ev);
  const Vec hpxy = hp(x, y).at(ev);
  const Vec hpyx = hp(y, x).at(ev);
  out.H = hxy;
  out.Hp = hpxy;
  out.L = 0.5 * (hxy - hyx);
  out.K = 0.5 * (hxy + hyx);
  out.Lp = 0.5 * (hpxy - hpyx);
  out.Kp = 0.5 * (hpxy + hpyx);

  const Mat j = J.at(ev);
  const Vec nj = nijenhuis(J, x, y).at(ev);
  const Vec mj = jordan_tensor(nabla, J, x, y).at(ev);
  const double c = 1.0 / (2.0 * d * r);
  out.L_closed = c * (sm * nj - j * nj);
  out.Lp_closed = -c * (sp * nj - j * nj);
  out.K_closed = c * (sm * mj - j * mj);
  out.Kp_closed = -c * (sp * mj - j * mj);

  // A_X Y = (nabla_X J) Y
  const VectorField jx = J.apply(x);
  const Vec ax = nabla_endo(nabla, J, x, y).at(ev);
  const Vec ajx = nabla_endo(nabla, J, jx, y).at(ev);
  const double q = mp.q;
  out.H_closed = (j * ajx - sp * (j * ax) - sm * ajx - q * ax) / (d * r);
  out.Hp_closed = -(j * ajx - sm * (j * ax) - sp * ajx - q * ax) / (d * r);
  out.HJ_over_disc = (j * ax - ajx) / d;
  return out;
}

EndoField almost_product(const EndoField& J, const MetallicParams& params) {
  const double s = params.root();
  const EndoField id = EndoField::identity(J.dim());
  return Expr(-1.0 / s) * (Expr(2.0) * J - Expr(params.p) * id);
}

EndoField subtangent(const EndoField& J, const MetallicParams& params) {
  if (std::abs(params.disc()) >= 1e-10)
    throw PreconditionError("subtangent structure needs p^2+4q = 0, got " +
                            std::to_string(params.disc()));
  return J - Expr(params.p / 2.0) * EndoField::identity(J.dim());
}

}  // namespace metallic
