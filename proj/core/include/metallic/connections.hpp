#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "metallic/structure.hpp"

namespace metallic {

/// A (1,2)-tensor field given as a rule on whole fields.
template <class F>
using BasicSTensor = std::function<F(const F&, const F&)>;
using STensor = BasicSTensor<VectorField>;

// Builders shared by the real and the complexified setting. F is the field
// type, A the projector type (EndoField or ComplexEndoField). Every scalar
// coefficient below is real, so the same formulas serve both cases.

/// P(nabla_X PY) + P'(nabla_X P'Y) + P(S(X,PY)) + P'(S(X,P'Y)).
template <class F, class A>
BasicConnection<F> adapted_from(const BasicConnection<F>& nabla, const A& P, const A& Pp,
                                BasicSTensor<F> S, std::string name = "adapted") {
  return BasicConnection<F>(std::move(name), [=](const F& x, const F& y) {
    const F py = P.apply(y);
    const F ppy = Pp.apply(y);
    F r = P.apply(nabla(x, py)) + Pp.apply(nabla(x, ppy));
    if (S) r = r + P.apply(S(x, py)) + Pp.apply(S(x, ppy));
    return r;
  });
}

template <class F, class A>
BasicConnection<F> svk_projector(const BasicConnection<F>& nabla, const A& P, const A& Pp) {
  return adapted_from<F, A>(nabla, P, Pp, nullptr, "schouten-van-kampen");
}

/// (1/disc)[(2J - pI)(nabla_X JY) - (pJ - (p^2+2q)I)(nabla_X Y)]; assumes a
/// torsion-free base.
template <class F>
BasicConnection<F> svk_closed(const BasicConnection<F>& nabla, const EndoField& J,
                              const MetallicParams& mp) {
  const double d = mp.disc();
  const double p = mp.p;
  const double c = p * p + 2.0 * mp.q;
  return BasicConnection<F>("schouten-van-kampen-closed", [=](const F& x, const F& y) {
    const F a = nabla(x, J.apply(y));
    const F b = nabla(x, y);
    return Expr(1.0 / d) * (Expr(2.0) * J.apply(a) - Expr(p) * a - Expr(p) * J.apply(b) +
                            Expr(c) * b);
  });
}

/// P(nabla_{PX} PY) + P'(nabla_{P'X} P'Y) + P[P'X, PY] + P'[PX, P'Y].
template <class F, class A>
BasicConnection<F> vranceanu_from(const BasicConnection<F>& nabla, const A& P, const A& Pp) {
  return BasicConnection<F>("vranceanu", [=](const F& x, const F& y) {
    const F px = P.apply(x);
    const F ppx = Pp.apply(x);
    const F py = P.apply(y);
    const F ppy = Pp.apply(y);
    return P.apply(nabla(px, py)) + Pp.apply(nabla(ppx, ppy)) + P.apply(lie_bracket(ppx, py)) +
           Pp.apply(lie_bracket(px, ppy));
  });
}

/// The printed variant nabla~_{PX} Y + P[P'X, PY] + P'[PX, P'Y]. It is not
/// a connection: the Leibniz rule fails in the D' part when P'X != 0.
template <class F, class A>
BasicConnection<F> vranceanu_printed(const BasicConnection<F>& nabla, const A& P, const A& Pp) {
  const BasicConnection<F> svk = svk_projector<F, A>(nabla, P, Pp);
  return BasicConnection<F>("vranceanu-printed", [=](const F& x, const F& y) {
    const F px = P.apply(x);
    const F ppx = Pp.apply(x);
    return svk(px, y) + P.apply(lie_bracket(ppx, P.apply(y))) +
           Pp.apply(lie_bracket(px, Pp.apply(y)));
  });
}

/// (1/disc)[2J((nabla_X J)Y) - p(nabla_X J)Y + J((nabla_Y J)X) + (nabla_{JY} J)X
/// - p(nabla_Y J)X], the correction shared by the Vidal and Vranceanu forms.
template <class F>
F vidal_correction(const BasicConnection<F>& nabla, const EndoField& J, const MetallicParams& mp,
                   const F& x, const F& y) {
  const F axy = nabla_endo(nabla, J, x, y);
  const F ayx = nabla_endo(nabla, J, y, x);
  const F ajyx = nabla_endo(nabla, J, J.apply(y), x);
  return Expr(1.0 / mp.disc()) * (Expr(2.0) * J.apply(axy) - Expr(mp.p) * axy + J.apply(ayx) +
                                  ajyx - Expr(mp.p) * ayx);
}

/// Expanded Vranceanu form, valid for a base connection with torsion.
template <class F>
BasicConnection<F> vranceanu_expanded(const BasicConnection<F>& nabla, const EndoField& J,
                                      const MetallicParams& mp) {
  return BasicConnection<F>("vranceanu-expanded", [=](const F& x, const F& y) {
    const F jx = J.apply(x);
    const F jy = J.apply(y);
    const F tjxy = torsion(nabla, jx, y);
    const F t = torsion(nabla, jx, jy) + J.apply(tjxy) - Expr(mp.p) * tjxy -
                J.apply(torsion(nabla, x, jy)) - Expr(mp.q) * torsion(nabla, x, y);
    return nabla(x, y) + vidal_correction(nabla, J, mp, x, y) + Expr(1.0 / mp.disc()) * t;
  });
}

template <class F>
BasicConnection<F> vidal_from(const BasicConnection<F>& nabla, const EndoField& J,
                              const MetallicParams& mp) {
  return BasicConnection<F>("vidal", [=](const F& x, const F& y) {
    return nabla(x, y) + vidal_correction(nabla, J, mp, x, y);
  });
}

/// nabla~_X Y - P((nabla_{PY} P')X) - P'((nabla_{P'Y} P)X).
template <class F, class A>
BasicConnection<F> vidal_projector(const BasicConnection<F>& nabla, const A& P, const A& Pp) {
  const BasicConnection<F> svk = svk_projector<F, A>(nabla, P, Pp);
  return BasicConnection<F>("vidal-projector", [=](const F& x, const F& y) {
    return svk(x, y) - P.apply(nabla_endo(nabla, Pp, P.apply(y), x)) -
           Pp.apply(nabla_endo(nabla, P, Pp.apply(y), x));
  });
}

template <class F, class A>
BasicConnection<F> product_conjugate_from(const BasicConnection<F>& nabla, const A& P,
                                          const A& Pp) {
  return BasicConnection<F>("product-conjugate", [=](const F& x, const F& y) {
    const F a = nabla(x, P.apply(y));
    const F b = nabla(x, Pp.apply(y));
    return P.apply(a) - P.apply(b) - Pp.apply(a) + Pp.apply(b);
  });
}

/// Printed torsion of the Schouten-van Kampen connection over a torsion-free
/// base: (1/disc)[(2J-pI)(nabla_X JY - nabla_Y JX) - (pJ+2qI)(nabla_X Y - nabla_Y X)].
template <class F>
F svk_torsion_printed(const BasicConnection<F>& nabla, const EndoField& J,
                      const MetallicParams& mp, const F& x, const F& y) {
  const F a = nabla(x, J.apply(y)) - nabla(y, J.apply(x));
  const F b = nabla(x, y) - nabla(y, x);
  return Expr(1.0 / mp.disc()) * (Expr(2.0) * J.apply(a) - Expr(mp.p) * a - Expr(mp.p) * J.apply(b) -
                                  Expr(2.0 * mp.q) * b);
}

/// N_J/disc + P'(T(P'X,P'Y)) - P(T(PX,PY)).
template <class F, class A>
F vranceanu_torsion_printed(const BasicConnection<F>& nabla, const EndoField& J,
                            const MetallicParams& mp, const A& P, const A& Pp, const F& x,
                            const F& y) {
  return Expr(1.0 / mp.disc()) * nijenhuis(J, x, y) +
         Pp.apply(torsion(nabla, Pp.apply(x), Pp.apply(y))) -
         P.apply(torsion(nabla, P.apply(x), P.apply(y)));
}

// Real-case constructors.

Connection adapted_general(const Connection& nabla, STensor S, const EndoField& J,
                           const MetallicParams& mp);
/// Projector form over the Levi-Civita connection.
Connection schouten_van_kampen(const Structure& s);
/// Closed form over the Levi-Civita connection.
Connection schouten_van_kampen_closed(const Structure& s);
Connection vranceanu(const Connection& nabla, const EndoField& J, const MetallicParams& mp);
Connection vidal(const Structure& s);
Connection product_conjugate(const Connection& nabla, const EndoField& J, const MetallicParams& mp);

struct RestrictionReport {
  bool holds = false;
  double max_defect = 0;
};

/// Max over samples, coordinate directions X and frame fields Y of the given
/// side of the component of nabla_X Y leaving that side.
RestrictionReport restricts_to(const Connection& nabla, const DistributionFrame& frame, Side side,
                               const std::vector<Point>& samples, double tol = 1e-7);

/// Vidal metricity defect (nabla_X g)(Y,Z) three ways.
struct MetricityDefect {
  double direct = 0;
  double form_nabla_jy = 0;  // -(1/disc)[g((nabla_{JY}J)X - (nabla_Y J)JX, Z) + (Y<->Z)]
  double form_mj = 0;        // M_J form as printed
  /// M_J form with the terms -g(J((nabla_X J)Y + (nabla_Y J)X), Z) + (Y<->Z)
  /// restored; equals the direct value.
  double form_mj_corrected = 0;
};

MetricityDefect vidal_metricity_defect(const Structure& s, const VectorField& x,
                                       const VectorField& y, const VectorField& z,
                                       std::span<const double> pt);

struct KirichenkoTensors {
  Vec T, A, C, B;
  Vec C_from_TA;  // 2[T(X,P'Y) + A(X,PY)]
  Vec B_from_TA;  // -2[T(X,PY) + A(X,P'Y)]
};

KirichenkoTensors oneill_gray_kirichenko(const Structure& s, const VectorField& x,
                                         const VectorField& y, std::span<const double> pt);

}  // namespace metallic
