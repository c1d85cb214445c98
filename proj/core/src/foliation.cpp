#include "metallic/foliation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "metallic/errors.hpp"
#include "metallic/linalg.hpp"
#include "metallic/sampling.hpp"

namespace metallic {

namespace {

double max_norm(const std::vector<VectorField>& fields, const std::vector<Point>& samples) {
  double m = 0;
  for (const Point& pt : samples) {
    Evaluator ev(pt);
    for (const VectorField& f : fields) m = std::max(m, f.at(ev).norm());
  }
  return m;
}

std::vector<VectorField> projector_columns(const EndoField& p) {
  std::vector<VectorField> cols;
  for (int i = 0; i < p.dim(); ++i) cols.push_back(p.column(i));
  return cols;
}

// Shared driver: `lie` selects brackets and N_J (true) or Jordan brackets and
// M_J (false).
FoliationReport characterize(const Structure& s, const std::vector<Point>& samples, double tol,
                             bool lie) {
  s.params.require_real();
  if (samples.empty()) throw PreconditionError("no sample points");
  const int n = s.dim();
  const ProjectorFields pr = projector_fields(s.J, s.params);
  const Connection& nabla = s.lc;
  auto bracket = [&](const VectorField& x, const VectorField& y) {
    return lie ? lie_bracket(x, y) : jordan(nabla, x, y);
  };
  auto tensor = [&](const VectorField& x, const VectorField& y) {
    return lie ? nijenhuis(s.J, x, y) : jordan_tensor(nabla, s.J, x, y);
  };
  const Expr sign(lie ? -1.0 : 1.0);

  // The eigencondition tensor does not depend on the side.
  std::vector<VectorField> t;
  for (int i = 0; i < n; ++i)
    for (int j = lie ? i + 1 : i; j < n; ++j)
      t.push_back(tensor(VectorField::coordinate(n, i), VectorField::coordinate(n, j)));

  FoliationReport rep;
  rep.samples = samples.size();
  rep.tolerance = tol;
  for (Side side : {Side::D, Side::DPrime}) {
    const EndoField& onto = side == Side::D ? pr.P : pr.Pp;
    const EndoField& away = side == Side::D ? pr.Pp : pr.P;
    const double sigma = side == Side::D ? s.params.sm() : s.params.sp();
    const auto cols = projector_columns(onto);

    std::vector<VectorField> proj, eig, rem;
    for (int i = 0; i < n; ++i)
      for (int j = lie ? i + 1 : i; j < n; ++j) {
        const auto& x = cols[static_cast<std::size_t>(i)];
        const auto& y = cols[static_cast<std::size_t>(j)];
        proj.push_back(away.apply(bracket(x, y)));
        rem.push_back(nabla_endo(nabla, s.J, x, y) + sign * nabla_endo(nabla, s.J, y, x));
      }
    for (const VectorField& v : t) eig.push_back(s.J.apply(v) - Expr(sigma) * v);

    DistributionVerdict& d = side == Side::D ? rep.d : rep.dp;
    d.rank = numerical_rank(onto.at(samples.front()));
    d.projection_defect = max_norm(proj, samples);
    d.eigen_defect = max_norm(eig, samples);
    d.remark_defect = max_norm(rem, samples);
    d.projection_ok = d.projection_defect < tol;
    d.eigen_ok = d.eigen_defect < tol;
    d.remark_ok = d.remark_defect < tol;
  }
  return rep;
}

const EndoField& pick(const ProjectorFields& pr, Side side, bool onto) {
  return (side == Side::D) == onto ? pr.P : pr.Pp;
}

// Orthonormal bases with an absolute floor, so that products which vanish up
// to rounding have empty span.
Mat span_of(const Mat& m, double atol = 1e-10) {
  if (m.cols() == 0 || m.norm() < atol) return Mat(m.rows(), 0);
  const Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU);
  const auto& s = svd.singularValues();
  const double cut = std::max(atol, kRankTolerance * s(0));
  int r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  return svd.matrixU().leftCols(r);
}

Mat null_of(const Mat& m, double atol = 1e-10) {
  const auto n = m.cols();
  if (m.rows() == 0 || m.norm() < atol) return Mat::Identity(n, n);
  const Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double cut = std::max(atol, kRankTolerance * s(0));
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  return svd.matrixV().rightCols(n - r);
}

Mat orthonormal_pair(const Vec& a, const Vec& b) {
  Mat q(a.size(), 2);
  q.col(0) = a.normalized();
  Vec c = b - q.col(0).dot(b) * q.col(0);
  q.col(1) = c.normalized();
  return q;
}

}  // namespace

FoliationReport integrability_report(const Structure& s, const std::vector<Point>& samples,
                                     double tol) {
  return characterize(s, samples, tol, true);
}

FoliationReport geodesic_invariance_report(const Structure& s, const std::vector<Point>& samples,
                                           double tol) {
  return characterize(s, samples, tol, false);
}

void require_in(const Structure& s, Side side, const VectorField& x, std::span<const double> pt) {
  const ProjectorPair pp = projectors(s.J, s.params, pt);
  const Vec v = x.at(pt);
  const Mat& away = side == Side::D ? pp.Pp : pp.P;
  const double r = (away * v).norm();
  if (r > kMembershipTolerance * std::max(1.0, v.norm()))
    throw PreconditionError(std::string("field is not in ") + (side == Side::D ? "D" : "D'") +
                            " (projection residual " + std::to_string(r) + ")");
}

Connection induced_connection(const Structure& s, Side side) {
  const ProjectorFields pr = projector_fields(s.J, s.params);
  const EndoField onto = pick(pr, side, true);
  const Connection nabla = s.lc;
  return Connection(side == Side::D ? "induced-D" : "induced-D'",
                    [=](const VectorField& x, const VectorField& y) {
                      return onto.apply(nabla(x, y));
                    });
}

VectorField bracket_d(const Structure& s, Side side, const VectorField& x, const VectorField& y) {
  const ProjectorFields pr = projector_fields(s.J, s.params);
  return pick(pr, side, true).apply(lie_bracket(x, y));
}

InducedTorsion induced_torsion(const Structure& s, Side side, const VectorField& x,
                               const VectorField& y, std::span<const double> pt) {
  require_in(s, side, x, pt);
  require_in(s, side, y, pt);
  const Connection nd = induced_connection(s, side);
  const VectorField a = nd(x, y) - nd(y, x);
  Evaluator ev(pt);
  InducedTorsion t;
  t.lie = (a - lie_bracket(x, y)).at(ev);
  t.bracket_d = (a - bracket_d(s, side, x, y)).at(ev);
  return t;
}

double induced_metricity(const Structure& s, Side side, const VectorField& x, const VectorField& y,
                         const VectorField& z, std::span<const double> pt) {
  require_in(s, side, x, pt);
  require_in(s, side, y, pt);
  require_in(s, side, z, pt);
  return eval(nabla_metric(induced_connection(s, side), s.g, x, y, z), pt);
}

Vec jacobiator_d(const Structure& s, Side side, const VectorField& x, const VectorField& y,
                 const VectorField& z, std::span<const double> pt) {
  require_in(s, side, x, pt);
  require_in(s, side, y, pt);
  require_in(s, side, z, pt);
  auto b = [&](const VectorField& u, const VectorField& v) { return bracket_d(s, side, u, v); };
  return (b(x, b(y, z)) + b(y, b(z, x)) + b(z, b(x, y))).at(pt);
}

Vec second_fundamental_form(const Structure& s, Side side, const VectorField& x,
                            const VectorField& y, std::span<const double> pt) {
  require_in(s, side, x, pt);
  require_in(s, side, y, pt);
  const ProjectorFields pr = projector_fields(s.J, s.params);
  return pick(pr, side, false).apply(s.lc(x, y)).at(pt);
}

LeafGeometry::LeafGeometry(const Structure& s, Side side, std::span<const double> pt,
                           const Mat& frame)
    : m_(s.dim()), pt_(pt.begin(), pt.end()) {
  const ProjectorFields pr = projector_fields(s.J, s.params);
  const EndoField& onto = pick(pr, side, true);
  const EndoField& away = pick(pr, side, false);
  Evaluator ev(pt);
  g_ = s.g.at(ev);
  proj_ = onto.at(ev);

  Mat basis;
  if (frame.size() == 0) {
    basis = range_basis(proj_);
  } else {
    if (frame.rows() != m_) throw ShapeError("frame has the wrong number of rows");
    if ((away.at(ev) * frame).norm() > kMembershipTolerance * std::max(1.0, frame.norm()))
      throw PreconditionError("frame columns leave the distribution");
    if (numerical_rank(frame) != numerical_rank(proj_))
      throw PreconditionError("frame does not span the distribution");
    basis = frame;
  }
  n_ = static_cast<int>(basis.cols());
  const Mat gram = basis.transpose() * g_ * basis;
  const Eigen::LLT<Mat> llt(gram);
  if (n_ == 0 || llt.info() != Eigen::Success ||
      Eigen::SelfAdjointEigenSolver<Mat>(gram).eigenvalues().minCoeff() <= 1e-12)
    throw PreconditionError("metric restricted to the distribution is not positive definite");
  e_ = llt.matrixL().solve(basis.transpose()).transpose();

  const auto mm = static_cast<std::size_t>(m_);
  hc_.resize(mm * mm);
  for (int i = 0; i < m_; ++i)
    for (int j = 0; j < m_; ++j)
      hc_[static_cast<std::size_t>(i * m_ + j)] =
          away.apply(s.lc(onto.column(i), onto.column(j))).at(ev);

  hf_.resize(static_cast<std::size_t>(n_ * n_));
  for (int a = 0; a < n_; ++a)
    for (int b = 0; b < n_; ++b) hf_[static_cast<std::size_t>(a * n_ + b)] = h(e_.col(a), e_.col(b));

  const RiemannTensor rt(s.g, pt);
  rm_.resize(mm * mm * mm * mm);
  for (int a = 0; a < m_; ++a)
    for (int b = 0; b < m_; ++b)
      for (int c = 0; c < m_; ++c)
        for (int d = 0; d < m_; ++d)
          rm_[static_cast<std::size_t>(((a * m_ + b) * m_ + c) * m_ + d)] = rt(a, b, c, d);

  const auto nn = static_cast<std::size_t>(n_);
  rd_.resize(nn * nn * nn * nn);
  for (int a = 0; a < n_; ++a)
    for (int b = 0; b < n_; ++b)
      for (int c = 0; c < n_; ++c)
        for (int d = 0; d < n_; ++d)
          rd_[static_cast<std::size_t>(((a * n_ + b) * n_ + c) * n_ + d)] =
              rm(e_.col(a), e_.col(b), e_.col(c), e_.col(d)) -
              inner(h_frame(a, c), h_frame(b, d)) + inner(h_frame(a, d), h_frame(b, c));
}

double LeafGeometry::rm(const Vec& x, const Vec& y, const Vec& z, const Vec& w) const {
  double r = 0;
  for (int a = 0; a < m_; ++a)
    for (int b = 0; b < m_; ++b)
      for (int c = 0; c < m_; ++c)
        for (int d = 0; d < m_; ++d)
          r += rm_[static_cast<std::size_t>(((a * m_ + b) * m_ + c) * m_ + d)] * x(a) * y(b) *
               z(c) * w(d);
  return r;
}

Vec LeafGeometry::h(const Vec& x, const Vec& y) const {
  const Vec px = proj_ * x;
  const Vec py = proj_ * y;
  Vec r = Vec::Zero(m_);
  for (int i = 0; i < m_; ++i)
    for (int j = 0; j < m_; ++j) r += px(i) * py(j) * hc_[static_cast<std::size_t>(i * m_ + j)];
  return r;
}

double LeafGeometry::h_asymmetry() const {
  double r = 0;
  for (int a = 0; a < n_; ++a)
    for (int b = a + 1; b < n_; ++b) r = std::max(r, (h_frame(a, b) - h_frame(b, a)).norm());
  return r;
}

double LeafGeometry::gauss(const Vec& x, const Vec& y, const Vec& z, const Vec& w) const {
  return rm(x, y, z, w) - inner(h(x, z), h(y, w)) + inner(h(x, w), h(y, z));
}

double LeafGeometry::sectional(const Vec& u, const Vec& v) const {
  double r = 0;
  for (int a = 0; a < n_; ++a)
    for (int b = 0; b < n_; ++b)
      for (int c = 0; c < n_; ++c)
        for (int d = 0; d < n_; ++d) r += rd(a, b, c, d) * u(a) * v(b) * v(c) * u(d);
  return r;
}

Vec LeafGeometry::mean_curvature() const {
  Vec H = Vec::Zero(m_);
  for (int a = 0; a < n_; ++a) H += h_frame(a, a);
  return H / n_;
}

double LeafGeometry::h_norm_sq() const {
  double r = 0;
  for (const Vec& v : hf_) r += inner(v, v);
  return r;
}

double LeafGeometry::scalar_curvature() const {
  double t = 0;
  for (int a = 0; a < n_; ++a)
    for (int b = a + 1; b < n_; ++b) t += rd(a, b, b, a);
  return t;
}

MeanCurvature mean_curvature(const Structure& s, std::span<const double> pt, Side side,
                             const Mat& frame) {
  const LeafGeometry leaf(s, side, pt, frame);
  MeanCurvature mc;
  mc.H = leaf.mean_curvature();
  mc.norm_sq = leaf.inner(mc.H, mc.H);
  return mc;
}

GaussValue gauss_rd(const Structure& s, const VectorField& x, const VectorField& y,
                    const VectorField& z, const VectorField& w, std::span<const double> pt,
                    Side side) {
  for (const VectorField* f : {&x, &y, &z, &w}) require_in(s, side, *f, pt);
  const LeafGeometry leaf(s, side, pt);
  GaussValue gv;
  Evaluator ev(pt);
  gv.value = leaf.gauss(x.at(ev), y.at(ev), z.at(ev), w.at(ev));
  gv.h_asymmetry = leaf.h_asymmetry();
  gv.integrable = gv.h_asymmetry < kMembershipTolerance;
  return gv;
}

SectionalMinimum inf_sectional(const LeafGeometry& leaf, std::size_t certify_samples) {
  const int n = leaf.rank();
  if (n < 2) throw PreconditionError("sectional curvature needs rank >= 2");
  SectionalMinimum out;
  if (n == 2) {
    out.value = leaf.sectional(Vec::Unit(2, 0), Vec::Unit(2, 1));
    out.plane = leaf.frame();
    out.sampled_min = out.value;
    out.certified = true;
    out.starts = 1;
    return out;
  }

  auto grad = [&](const Vec& u, const Vec& v, Vec& gu, Vec& gv) {
    gu = Vec::Zero(n);
    gv = Vec::Zero(n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            const double r = leaf.rd(a, b, c, d);
            if (r == 0) continue;
            gu(a) += r * v(b) * v(c) * u(d);
            gu(d) += r * u(a) * v(b) * v(c);
            gv(b) += r * u(a) * v(c) * u(d);
            gv(c) += r * u(a) * v(b) * u(d);
          }
  };

  // Starts from Halton points in [-1,1]^{2n}; deterministic order, first
  // strict minimum wins.
  std::vector<Vec> starts;
  std::mt19937_64 rng(0x5ec7u);
  std::normal_distribution<double> normal;
  const int dims = 2 * n;
  std::vector<Point> pts;
  if (dims <= 16) pts = halton_points(Point(static_cast<std::size_t>(dims), -1.0),
                                      Point(static_cast<std::size_t>(dims), 1.0), kSectionalStarts);
  for (int k = 0; k < kSectionalStarts; ++k) {
    Vec x(dims);
    for (int i = 0; i < dims; ++i)
      x(i) = dims <= 16 ? pts[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)]
                        : normal(rng);
    starts.push_back(x);
  }

  out.value = std::numeric_limits<double>::infinity();
  Vec best_u, best_v;
  for (const Vec& x : starts) {
    const Vec a = x.head(n);
    const Vec b = x.tail(n);
    if (a.norm() < 1e-8 || (b - a.normalized().dot(b) * a.normalized()).norm() < 1e-8) continue;
    Mat U = orthonormal_pair(a, b);
    double f = leaf.sectional(U.col(0), U.col(1));
    double step = 1.0;
    for (int it = 0; it < 20000; ++it) {
      Vec gu, gv;
      grad(U.col(0), U.col(1), gu, gv);
      Mat G(n, 2);
      G << gu, gv;
      const Mat S = U.transpose() * G;
      const Mat rg = G - U * (0.5 * (S + S.transpose()));
      const double gn = rg.norm();
      if (gn < 1e-10) break;
      bool moved = false;
      step = std::min(1.0, step * 2.0);
      while (step > 1e-16) {
        const Mat V = U - step * rg;
        const Mat W = orthonormal_pair(V.col(0), V.col(1));
        const double fw = leaf.sectional(W.col(0), W.col(1));
        if (fw <= f - 1e-4 * step * gn * gn) {
          U = W;
          f = fw;
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
    }
    ++out.starts;
    if (f < out.value) {
      out.value = f;
      best_u = U.col(0);
      best_v = U.col(1);
    }
  }
  if (out.starts == 0) throw PreconditionError("no usable start for the sectional minimum");
  out.plane.resize(leaf.ambient_dim(), 2);
  out.plane.col(0) = leaf.frame() * best_u;
  out.plane.col(1) = leaf.frame() * best_v;

  out.sampled_min = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < certify_samples; ++k) {
    Vec a(n), b(n);
    for (int i = 0; i < n; ++i) a(i) = normal(rng);
    for (int i = 0; i < n; ++i) b(i) = normal(rng);
    const Mat q = orthonormal_pair(a, b);
    out.sampled_min = std::min(out.sampled_min, leaf.sectional(q.col(0), q.col(1)));
  }
  out.sampled_planes = certify_samples;
  out.certified = certify_samples == 0 ||
                  (out.value <= out.sampled_min + 1e-9 && out.sampled_min - out.value <= 1e-4);
  return out;
}

SectionalMinimum inf_sectional(const Structure& s, std::span<const double> pt) {
  return inf_sectional(LeafGeometry(s, Side::D, pt));
}

ChenReport chen_report(const Structure& s, double a, double b, double c,
                       std::span<const double> pt, double tol) {
  const MetallicParams& mp = s.params;
  const double sm = mp.sm();
  const int m = s.dim();
  ChenReport r;
  r.point.assign(pt.begin(), pt.end());
  r.a = a;
  r.b = b;
  r.c = c;
  if (m <= 2) r.flags.push_back("ambient dimension must exceed 2");

  r.constraint_residual = mp.q * a * a - mp.p * a * b - b * b - 1.0;
  if (std::abs(r.constraint_residual) > tol) r.flags.push_back("q a^2 - p a b - b^2 != 1");

  // (e3) is multilinear, so coordinate 4-tuples decide it.
  Evaluator ev(pt);
  const Mat g = s.g.at(ev);
  const Mat gf = g * (a * s.J.at(ev) + b * Mat::Identity(m, m));
  const RiemannTensor rt(s.g, pt);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          const double model = c * (gf(i, l) * gf(j, k) - gf(i, k) * gf(j, l));
          r.e3_residual = std::max(r.e3_residual, std::abs(rt(i, j, k, l) - model));
        }
  if (r.e3_residual > 1e-7) r.flags.push_back("curvature is not of the (aJ+bI) model form");

  const LeafGeometry leaf(s, Side::D, pt);
  r.n = leaf.rank();
  r.frame = leaf.frame();
  r.h_asymmetry = leaf.h_asymmetry();
  if (r.h_asymmetry > kMembershipTolerance) r.flags.push_back("D is not integrable at the point");

  const double n = r.n;
  r.tau = leaf.scalar_curvature();
  r.inf_k = inf_sectional(leaf);
  r.delta = r.tau - r.inf_k.value;
  const Vec H = leaf.mean_curvature();
  r.h_mean_sq = leaf.inner(H, H);
  r.h_norm_sq = leaf.h_norm_sq();
  const double k0 = c * (a * sm + b) * (a * sm + b);
  r.two_tau_residual = 2 * r.tau - (k0 * n * (n - 1) - r.h_norm_sq + n * n * r.h_mean_sq);
  r.lhs = r.delta;
  r.rhs = k0 * (n * n - n + 2) / 2 + n * n * (n - 2) / (2 * (n - 1)) * r.h_mean_sq;
  r.holds = r.lhs <= r.rhs + tol;
  return r;
}

MapSpec MapSpec::parse(const std::vector<std::string>& components, int source_dim) {
  MapSpec m;
  m.source_dim = source_dim;
  for (const std::string& c : components) m.components.push_back(metallic::parse(c, source_dim));
  return m;
}

MapSpec MapSpec::identity(int n) {
  MapSpec m;
  m.source_dim = n;
  for (int i = 0; i < n; ++i) m.components.push_back(Expr::coord(i));
  return m;
}

Point MapSpec::apply(std::span<const double> pt) const {
  if (static_cast<int>(pt.size()) != source_dim) throw ShapeError("point has the wrong dimension");
  Evaluator ev(pt);
  Point out;
  for (const Expr& c : components) out.push_back(ev(c));
  return out;
}

Mat MapSpec::jacobian(std::span<const double> pt) const {
  if (static_cast<int>(pt.size()) != source_dim) throw ShapeError("point has the wrong dimension");
  Evaluator ev(pt);
  Mat d(target_dim(), source_dim);
  for (int a = 0; a < target_dim(); ++a)
    for (int i = 0; i < source_dim; ++i)
      d(a, i) = ev(diff(components[static_cast<std::size_t>(a)], i));
  return d;
}

MapReport metallic_map_report(const MapSpec& phi, const EndoField& j1, const EndoField& j2,
                              const MetallicParams& params1, const MetallicParams& params2,
                              const std::vector<Point>& samples) {
  if (j1.dim() != phi.source_dim) throw ShapeError("J1 does not match the source dimension");
  if (j2.dim() != phi.target_dim()) throw ShapeError("J2 does not match the target dimension");
  const int m = phi.source_dim;
  const double p1 = params1.p, q1 = params1.q, p2 = params2.p, q2 = params2.q;
  MapReport r;
  r.samples = samples.size();
  for (const Point& pt : samples) {
    const Mat d = phi.jacobian(pt);
    const Mat a = j1.at(pt);
    const Mat b = j2.at(phi.apply(pt));
    r.metallic_residual = std::max(r.metallic_residual, fro(d * a - b * d));
    Mat ak = a, bk = b;
    for (int k = 0; k < 2; ++k) {
      ak = ak * a * a;
      bk = bk * b * b;
      r.odd_power_residual[static_cast<std::size_t>(k)] =
          std::max(r.odd_power_residual[static_cast<std::size_t>(k)], fro(d * ak - bk * d));
    }
    const Mat l = ((p2 * p2 + q2) - (p1 * p1 + q1)) * a + (p2 * q2 - p1 * q1) * Mat::Identity(m, m);
    const Mat k = null_of(d);
    r.containment_residual = std::max(r.containment_residual, fro(l - k * (k.transpose() * l)));
  }
  return r;
}

LeafCorrespondence leaf_correspondence_check(const MapSpec& phi, const EndoField& j1,
                                             const MetallicParams& params1,
                                             const MetallicParams& params2,
                                             const std::vector<Point>& samples,
                                             const EndoField* j2) {
  if (j1.dim() != phi.source_dim) throw ShapeError("J1 does not match the source dimension");
  if (j2 && j2->dim() != phi.target_dim()) throw ShapeError("J2 does not match the target dimension");
  const int m = phi.source_dim;
  const Mat id = Mat::Identity(m, m);
  const double s1m = params1.sm(), s1p = params1.sp(), s2m = params2.sm(), s2p = params2.sp();
  LeafCorrespondence r;
  r.samples = samples.size();
  for (const Point& pt : samples) {
    const Mat d = phi.jacobian(pt);
    const Mat a = j1.at(pt);
    const Mat ker = null_of(d);
    const int kd = static_cast<int>(ker.cols());
    if (r.kernel_dim >= 0 && r.kernel_dim != kd) r.rank_varies = true;
    r.kernel_dim = kd;
    const Mat d1 = null_of(a - s1m * id);

    const Mat cond = span_of((a - s2m * id) * d1);
    r.condition_distance = std::max(r.condition_distance, subspace_distance(ker, cond));
    const Mat cond_printed = span_of((a - s2p * id) * null_of(a - s1p * id));
    r.condition_printed_distance =
        std::max(r.condition_printed_distance, subspace_distance(ker, cond_printed));

    r.pullback_distance =
        std::max(r.pullback_distance, subspace_distance(null_of(d * (a - s2m * id)), d1));
    r.pullback_printed_distance =
        std::max(r.pullback_printed_distance, subspace_distance(null_of(d * (a - s2p * id)), d1));
    if (j2) {
      const Mat b = j2->at(phi.apply(pt));
      const Mat direct = null_of((b - s2m * Mat::Identity(b.rows(), b.cols())) * d);
      r.direct_distance = std::max(r.direct_distance, subspace_distance(direct, d1));
    }
  }
  return r;
}

}  // namespace metallic
