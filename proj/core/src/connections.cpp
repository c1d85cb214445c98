#include "metallic/connections.hpp"

#include <algorithm>

namespace metallic {

Connection adapted_general(const Connection& nabla, STensor S, const EndoField& J,
                           const MetallicParams& mp) {
  const ProjectorFields pr = projector_fields(J, mp);
  return adapted_from<VectorField, EndoField>(nabla, pr.P, pr.Pp, std::move(S));
}

Connection schouten_van_kampen(const Structure& s) {
  const ProjectorFields pr = projector_fields(s.J, s.params);
  return svk_projector<VectorField, EndoField>(s.lc, pr.P, pr.Pp);
}

Connection schouten_van_kampen_closed(const Structure& s) {
  s.params.require_real();
  return svk_closed<VectorField>(s.lc, s.J, s.params);
}

Connection vranceanu(const Connection& nabla, const EndoField& J, const MetallicParams& mp) {
  const ProjectorFields pr = projector_fields(J, mp);
  return vranceanu_from<VectorField, EndoField>(nabla, pr.P, pr.Pp);
}

Connection vidal(const Structure& s) {
  s.params.require_real();
  return vidal_from<VectorField>(s.lc, s.J, s.params);
}

Connection product_conjugate(const Connection& nabla, const EndoField& J, const MetallicParams& mp) {
  const ProjectorFields pr = projector_fields(J, mp);
  return product_conjugate_from<VectorField, EndoField>(nabla, pr.P, pr.Pp);
}

RestrictionReport restricts_to(const Connection& nabla, const DistributionFrame& frame, Side side,
                               const std::vector<Point>& samples, double tol) {
  RestrictionReport r;
  const auto& ys = frame.fields(side);
  const EndoField& away = frame.away(side);
  const int n = away.dim();
  std::vector<VectorField> defects;
  for (int i = 0; i < n; ++i)
    for (const VectorField& y : ys)
      defects.push_back(away.apply(nabla(VectorField::coordinate(n, i), y)));
  for (const Point& pt : samples) {
    Evaluator ev(pt);
    for (const VectorField& v : defects) r.max_defect = std::max(r.max_defect, v.at(ev).norm());
  }
  r.holds = r.max_defect < tol;
  return r;
}

MetricityDefect vidal_metricity_defect(const Structure& s, const VectorField& x,
                                       const VectorField& y, const VectorField& z,
                                       std::span<const double> pt) {
  const MetallicParams& mp = s.params;
  mp.require_real();
  const Connection& lc = s.lc;
  const EndoField& J = s.J;
  const MetricField& g = s.g;
  const double d = mp.disc();
  Evaluator ev(pt);
  MetricityDefect out;
  out.direct = ev(nabla_metric(vidal(s), g, x, y, z));

  auto A = [&](const VectorField& u, const VectorField& v) { return nabla_endo(lc, J, u, v); };
  const VectorField jx = J.apply(x);
  const Expr a = g.inner(A(J.apply(y), x) - A(y, jx), z) + g.inner(A(J.apply(z), x) - A(z, jx), y);
  out.form_nabla_jy = -ev(a) / d;

  const Expr b = g.inner(jordan_tensor(lc, J, y, x), z) + g.inner(jordan_tensor(lc, J, z, x), y) +
                 g.inner(A(jx, y) + A(y, jx), z) + g.inner(A(jx, z) + A(z, jx), y);
  out.form_mj = ev(b) / d;
  const Expr c = g.inner(J.apply(A(x, y) + A(y, x)), z) + g.inner(J.apply(A(x, z) + A(z, x)), y);
  out.form_mj_corrected = out.form_mj - ev(c) / d;
  return out;
}

KirichenkoTensors oneill_gray_kirichenko(const Structure& s, const VectorField& x,
                                         const VectorField& y, std::span<const double> pt) {
  const ProjectorFields pr = projector_fields(s.J, s.params);
  const EndoField& P = pr.P;
  const EndoField& Pp = pr.Pp;
  const Connection& nabla = s.lc;
  auto T = [&](const VectorField& a, const VectorField& b) {
    const VectorField ppa = Pp.apply(a);
    return P.apply(nabla(ppa, Pp.apply(b))) + Pp.apply(nabla(ppa, P.apply(b)));
  };
  auto A = [&](const VectorField& a, const VectorField& b) {
    const VectorField pa = P.apply(a);
    return Pp.apply(nabla(pa, P.apply(b))) + P.apply(nabla(pa, Pp.apply(b)));
  };
  const VectorField px = P.apply(x);
  const VectorField ppx = Pp.apply(x);
  const VectorField py = P.apply(y);
  const VectorField ppy = Pp.apply(y);
  const VectorField C = Expr(2.0) * (P.apply(nabla(ppx, ppy)) + Pp.apply(nabla(px, py)));
  const VectorField B = Expr(-2.0) * (P.apply(nabla(px, ppy)) + Pp.apply(nabla(ppx, py)));

  Evaluator ev(pt);
  KirichenkoTensors out;
  out.T = T(x, y).at(ev);
  out.A = A(x, y).at(ev);
  out.C = C.at(ev);
  out.B = B.at(ev);
  out.C_from_TA = (Expr(2.0) * (T(x, ppy) + A(x, py))).at(ev);
  out.B_from_TA = (Expr(-2.0) * (T(x, py) + A(x, ppy))).at(ev);
  return out;
}

}  // namespace metallic
