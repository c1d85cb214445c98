#pragma once

#include <complex>
#include <span>
#include <vector>

#include "metallic/calculus.hpp"
#include "metallic/fields.hpp"

namespace metallic {

/// J^2 = pJ + qI.
struct MetallicParams {
  double p = 0.0;
  double q = 0.0;

  double disc() const { return p * p + 4.0 * q; }
  cplx sigma_plus() const;
  cplx sigma_minus() const;

  /// Real branch accessors; throw PreconditionError unless disc > 0.
  double sp() const;
  double sm() const;
  double root() const;
  void require_real() const;
};

/// A metric, an endomorphism and its parameters, plus the Levi-Civita
/// connection of the metric.
struct Structure {
  Structure(MetricField g_, EndoField j_, MetallicParams params_);

  MetricField g;
  EndoField J;
  MetallicParams params;
  Connection lc;

  int dim() const { return J.dim(); }
};

struct ValidationReport {
  std::size_t samples = 0;
  double metallic_residual = 0;   // max ||J^2 - pJ - qI||_F
  double symmetry_residual = 0;   // max ||gJ - (gJ)^T||_F
  double skew_residual = 0;       // max ||gJ + (gJ)^T||_F
  double j_norm = 0;              // max ||J||_F
  double disc = 0;
  bool indefinite = false;        // g indefinite at every sample
  bool definite = false;          // g definite at every sample
  bool signature_ok = true;       // disc < 0 requires indefinite g
  bool skew = false;              // g-skew-symmetry detected
  bool skew_consistent = true;    // skew forces p = 0
  double tolerance = 1e-9;

  bool ok() const;
};

ValidationReport validate(const MetricField& g, const EndoField& J, const MetallicParams& params,
                          const std::vector<Point>& samples, double tol = 1e-9);

struct ProjectorPair {
  Mat P;
  Mat Pp;
};

struct ProjectorFields {
  EndoField P;
  EndoField Pp;
};

ProjectorPair projectors(const EndoField& J, const MetallicParams& params,
                         std::span<const double> pt);
ProjectorFields projector_fields(const EndoField& J, const MetallicParams& params);

enum class Side { D, DPrime };

/// D = ker P' (sigma_- eigenvectors), D' = ker P (sigma_+ eigenvectors).
struct DistributionFrame {
  Point base;
  ProjectorFields proj;
  std::vector<VectorField> d;
  std::vector<VectorField> dp;
  std::vector<int> d_columns;
  std::vector<int> dp_columns;

  const std::vector<VectorField>& fields(Side s) const { return s == Side::D ? d : dp; }
  int rank(Side s) const { return static_cast<int>(fields(s).size()); }
  /// Projector onto the given side: P for D, P' for D'.
  const EndoField& onto(Side s) const { return s == Side::D ? proj.P : proj.Pp; }
  /// Projector that kills the given side.
  const EndoField& away(Side s) const { return s == Side::D ? proj.Pp : proj.P; }
};

DistributionFrame distribution_frame(const EndoField& J, const MetallicParams& params,
                                     std::span<const double> base);

enum class TensorKind { JBracket, Nijenhuis, JordanBracket, JordanTensor, DeformationHJ };

const char* tensor_name(TensorKind k);

// Generic forms: F is VectorField or ComplexVectorField, A anything with
// apply(F). The brackets need genuine fields, they are not tensorial.

template <class F, class A>
F j_bracket(const A& a, const F& x, const F& y) {
  return lie_bracket(a.apply(x), y) + lie_bracket(x, a.apply(y)) - a.apply(lie_bracket(x, y));
}

template <class F, class A>
F nijenhuis(const A& a, const F& x, const F& y) {
  return a.apply(j_bracket(a, x, y)) - lie_bracket(a.apply(x), a.apply(y));
}

template <class F>
F jordan(const BasicConnection<F>& nabla, const F& x, const F& y) {
  return nabla(x, y) + nabla(y, x);
}

template <class F, class A>
F jordan_bracket(const BasicConnection<F>& nabla, const A& a, const F& x, const F& y) {
  return jordan(nabla, a.apply(x), y) + jordan(nabla, x, a.apply(y)) -
         a.apply(jordan(nabla, x, y));
}

template <class F, class A>
F jordan_tensor(const BasicConnection<F>& nabla, const A& a, const F& x, const F& y) {
  return a.apply(jordan_bracket(nabla, a, x, y)) - jordan(nabla, a.apply(x), a.apply(y));
}

template <class F, class A>
F deformation_hj(const BasicConnection<F>& nabla, const A& a, const F& x, const F& y) {
  return a.apply(nabla_endo(nabla, a, x, y)) - nabla_endo(nabla, a, a.apply(x), y);
}

template <class F, class A>
F assoc_tensor(TensorKind kind, const BasicConnection<F>& nabla, const A& a, const F& x,
               const F& y) {
  switch (kind) {
    case TensorKind::JBracket: return j_bracket(a, x, y);
    case TensorKind::Nijenhuis: return nijenhuis(a, x, y);
    case TensorKind::JordanBracket: return jordan_bracket(nabla, a, x, y);
    case TensorKind::JordanTensor: return jordan_tensor(nabla, a, x, y);
    case TensorKind::DeformationHJ: return deformation_hj(nabla, a, x, y);
  }
  return F();
}

/// Value at a point, using J and the Levi-Civita connection of the structure.
Vec assoc_tensor(TensorKind kind, const Structure& s, const VectorField& x, const VectorField& y,
                 std::span<const double> pt);

struct DeformationSuite {
  // projector definitions
  Vec H, Hp, L, Lp, K, Kp;
  // printed closed forms
  Vec H_closed, Hp_closed, L_closed, Lp_closed, K_closed, Kp_closed;
  Vec HJ_over_disc;  // H_J(X,Y) / disc
};

DeformationSuite deformation_suite(const Structure& s, const VectorField& x, const VectorField& y,
                                   std::span<const double> pt);

/// J_p = -(2J - pI)/sqrt(disc), an almost product structure.
EndoField almost_product(const EndoField& J, const MetallicParams& params);

/// J - (p/2)I when disc vanishes (|disc| < 1e-10); squares to zero.
EndoField subtangent(const EndoField& J, const MetallicParams& params);

}  // namespace metallic
