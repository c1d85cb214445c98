#pragma once

#include <span>
#include <vector>

#include "metallic/connections.hpp"
#include "metallic/structure.hpp"

namespace metallic {

/// J^C(X + iY) = JX + iJY and g^C(X1 + iY1, X2 + iY2) at a point.
struct Complexified {
  CVec jx;
  cplx g;
};

Complexified complexify(const MetricField& g, const EndoField& J, const VectorField& x1,
                        const VectorField& y1, const VectorField& x2, const VectorField& y2,
                        std::span<const double> pt);

/// Throws PreconditionError unless p^2 + 4q < 0.
void require_complex(const MetallicParams& params);

struct ComplexProjectorPair {
  CMat P;
  CMat Pp;
};

struct ComplexProjectorFields {
  ComplexEndoField P;
  ComplexEndoField Pp;
};

/// P^C = (s_+ I - J)/sqrt(disc), P^C' = (J - s_- I)/sqrt(disc) with
/// sqrt(disc) = i sqrt(-disc). P^C projects onto D^C (the s_- eigenspace).
ComplexProjectorPair complex_projectors(const EndoField& J, const MetallicParams& params,
                                        std::span<const double> pt);
ComplexProjectorFields complex_projector_fields(const EndoField& J, const MetallicParams& params);

/// Spanning columns of D^C and D^C' at a point; the second is the entrywise
/// conjugate of the first.
struct ComplexFrame {
  CMat d;
  CMat dp;
  std::vector<int> columns;
};

ComplexFrame complex_frame(const EndoField& J, const MetallicParams& params,
                           std::span<const double> pt);

/// J_c = -(2J - pI)/sqrt(-disc); squares to -I.
EndoField norden_jc(const EndoField& J, const MetallicParams& params);

enum class ComplexKind { SchoutenVanKampen, Vranceanu, Vidal };

const char* complex_kind_name(ComplexKind k);

/// Built over the complexified Levi-Civita connection.
ComplexConnection complex_connection(ComplexKind kind, const Structure& s);

struct ComplexInvarianceReport {
  std::size_t samples = 0;
  double frobenius = 0;      // max |P^C'[P^C X, P^C Y]|
  double jordan = 0;         // max |P^C'{P^C X, P^C Y}|
  double nijenhuis = 0;      // max |N_J|
  double jordan_tensor = 0;  // max |M_J|
  double norden_nijenhuis = 0;  // max |N_{J_c}|
  double vidal_torsion = 0;     // max |T^{Vidal}|
  double tolerance = 1e-9;

  bool integrable() const { return frobenius < tolerance; }
  bool geodesically_invariant() const { return jordan < tolerance; }
  /// integrable <=> N_J = 0 <=> N_{J_c} = 0 <=> Vidal torsion-free, as observed
  bool integrability_agrees() const {
    const bool a = integrable();
    return a == (nijenhuis < tolerance) && a == (norden_nijenhuis < tolerance) &&
           a == (vidal_torsion < tolerance);
  }
  bool geodesic_agrees() const { return geodesically_invariant() == (jordan_tensor < tolerance); }
};

ComplexInvarianceReport complex_invariance_report(const Structure& s,
                                                  const std::vector<Point>& samples,
                                                  double tol = 1e-9);

}  // namespace metallic
