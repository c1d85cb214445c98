#include "metallic/norden.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "metallic/errors.hpp"
#include "metallic/linalg.hpp"

namespace metallic {

namespace {

ComplexVectorField column(const ComplexEndoField& a, int j) {
  return {a.re().column(j), a.im().column(j)};
}

}  // namespace

void require_complex(const MetallicParams& params) {
  if (!(params.disc() < 0))
    throw PreconditionError("complex projectors need p^2+4q < 0, got " +
                            std::to_string(params.disc()));
}

Complexified complexify(const MetricField& g, const EndoField& J, const VectorField& x1,
                        const VectorField& y1, const VectorField& x2, const VectorField& y2,
                        std::span<const double> pt) {
  Evaluator ev(pt);
  const ComplexVectorField u(x1, y1);
  const ComplexVectorField v(x2, y2);
  const auto [re, im] = g.inner(u, v);
  return {J.apply(u).at(ev), cplx(ev(re), ev(im))};
}

ComplexProjectorFields complex_projector_fields(const EndoField& J, const MetallicParams& params) {
  require_complex(params);
  // (s_+ - J)/(i r) = I/2 - i(J - p/2)/r with r = sqrt(-disc)
  const int n = J.dim();
  const double r = std::sqrt(-params.disc());
  const EndoField id = EndoField::identity(n);
  const EndoField half = Expr(0.5) * id;
  const EndoField im = Expr(1.0 / r) * (J - Expr(params.p / 2) * id);
  return {ComplexEndoField(half, im), ComplexEndoField(half, Expr(-1.0) * im)};
}

ComplexProjectorPair complex_projectors(const EndoField& J, const MetallicParams& params,
                                        std::span<const double> pt) {
  require_complex(params);
  const CMat j = J.at(pt).cast<cplx>();
  const CMat id = CMat::Identity(j.rows(), j.cols());
  const cplx sp = params.sigma_plus();
  const cplx sm = params.sigma_minus();
  const cplx root(0, std::sqrt(-params.disc()));
  return {(sp * id - j) / root, (j - sm * id) / root};
}

ComplexFrame complex_frame(const EndoField& J, const MetallicParams& params,
                           std::span<const double> pt) {
  const ComplexProjectorPair pr = complex_projectors(J, params, pt);
  ComplexFrame f;
  f.columns = pivot_columns(pr.P);
  std::sort(f.columns.begin(), f.columns.end());
  f.d.resize(pr.P.rows(), static_cast<Eigen::Index>(f.columns.size()));
  f.dp.resize(pr.P.rows(), static_cast<Eigen::Index>(f.columns.size()));
  for (std::size_t k = 0; k < f.columns.size(); ++k) {
    f.d.col(static_cast<Eigen::Index>(k)) = pr.P.col(f.columns[k]);
    f.dp.col(static_cast<Eigen::Index>(k)) = pr.Pp.col(f.columns[k]);
  }
  return f;
}

EndoField norden_jc(const EndoField& J, const MetallicParams& params) {
  require_complex(params);
  const double r = std::sqrt(-params.disc());
  return Expr(-1.0 / r) * (Expr(2.0) * J - Expr(params.p) * EndoField::identity(J.dim()));
}

const char* complex_kind_name(ComplexKind k) {
  switch (k) {
    case ComplexKind::SchoutenVanKampen: return "schouten-van-kampen";
    case ComplexKind::Vranceanu: return "vranceanu";
    case ComplexKind::Vidal: return "vidal";
  }
  return "";
}

ComplexConnection complex_connection(ComplexKind kind, const Structure& s) {
  require_complex(s.params);
  const ComplexConnection base = complexify(s.lc);
  const ComplexProjectorFields pr = complex_projector_fields(s.J, s.params);
  switch (kind) {
    case ComplexKind::SchoutenVanKampen:
      return svk_projector<ComplexVectorField, ComplexEndoField>(base, pr.P, pr.Pp);
    case ComplexKind::Vranceanu:
      return vranceanu_from<ComplexVectorField, ComplexEndoField>(base, pr.P, pr.Pp);
    case ComplexKind::Vidal:
      return vidal_from<ComplexVectorField>(base, s.J, s.params);
  }
  throw PreconditionError("unknown connection kind");
}

ComplexInvarianceReport complex_invariance_report(const Structure& s,
                                                  const std::vector<Point>& samples, double tol) {
  require_complex(s.params);
  if (samples.empty()) throw PreconditionError("no sample points");
  const int n = s.dim();
  const ComplexProjectorFields pr = complex_projector_fields(s.J, s.params);
  const ComplexConnection cl = complexify(s.lc);
  const EndoField jc = norden_jc(s.J, s.params);
  const Connection vid = vidal_from<VectorField>(s.lc, s.J, s.params);

  std::vector<ComplexVectorField> frob, jord;
  std::vector<VectorField> nj, mj, njc, tv;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const ComplexVectorField a = column(pr.P, i), b = column(pr.P, j);
      const VectorField x = VectorField::coordinate(n, i), y = VectorField::coordinate(n, j);
      jord.push_back(pr.Pp.apply(jordan(cl, a, b)));
      mj.push_back(jordan_tensor(s.lc, s.J, x, y));
      if (i == j) continue;
      frob.push_back(pr.Pp.apply(lie_bracket(a, b)));
      nj.push_back(nijenhuis(s.J, x, y));
      njc.push_back(nijenhuis(jc, x, y));
      tv.push_back(torsion(vid, x, y));
    }

  ComplexInvarianceReport r;
  r.samples = samples.size();
  r.tolerance = tol;
  for (const Point& pt : samples) {
    Evaluator ev(pt);
    for (const auto& v : frob) r.frobenius = std::max(r.frobenius, v.at(ev).norm());
    for (const auto& v : jord) r.jordan = std::max(r.jordan, v.at(ev).norm());
    for (const auto& v : nj) r.nijenhuis = std::max(r.nijenhuis, v.at(ev).norm());
    for (const auto& v : mj) r.jordan_tensor = std::max(r.jordan_tensor, v.at(ev).norm());
    for (const auto& v : njc) r.norden_nijenhuis = std::max(r.norden_nijenhuis, v.at(ev).norm());
    for (const auto& v : tv) r.vidal_torsion = std::max(r.vidal_torsion, v.at(ev).norm());
  }
  return r;
}

}  // namespace metallic
