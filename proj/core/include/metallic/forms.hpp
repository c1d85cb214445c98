#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "metallic/structure.hpp"

namespace metallic {

/// r-form with expression coefficients, keyed by the bitmask of a strictly
/// increasing multi-index (bit i is dx_{i+1}). Degrees -1 and n+1 occur only
/// as zero forms produced at the ends of the complex.
class FormField {
 public:
  using Mask = std::uint32_t;

  FormField() = default;
  FormField(int dim, int degree);

  static FormField scalar(int dim, const Expr& f);
  /// dx_{i+1}.
  static FormField dx(int dim, int i);
  /// f dx_{i_1} ^ ... ^ dx_{i_r}; indices must be distinct, any order.
  static FormField monomial(int dim, const Expr& f, const std::vector<int>& indices);

  int dim() const { return n_; }
  int degree() const { return r_; }
  const std::map<Mask, Expr>& terms() const { return c_; }
  Expr coeff(Mask m) const;
  void set(Mask m, const Expr& e);
  void add(Mask m, const Expr& e);

  /// Coefficients at a point, one entry per increasing multi-index of the
  /// degree, in increasing mask order.
  Vec at(Evaluator& ev) const;
  Vec at(std::span<const double> pt) const;

 private:
  int n_ = 0;
  int r_ = 0;
  std::map<Mask, Expr> c_;
};

FormField operator+(const FormField& a, const FormField& b);
FormField operator-(const FormField& a, const FormField& b);
FormField operator-(const FormField& a);
FormField operator*(const Expr& f, const FormField& a);

/// All masks of popcount r among n bits, increasing.
std::vector<FormField::Mask> masks_of_degree(int n, int r);

FormField wedge(const FormField& a, const FormField& b);
/// Throws ShapeError on top-degree input.
FormField exterior_d(const FormField& a);

/// (A^* a)(X_1..X_r) = a(AX_1, ..., AX_r); identity on 0-forms.
FormField pullback(const EndoField& A, const FormField& a);

/// a + i b, for the d-bar operators.
struct ComplexForm {
  FormField re;
  FormField im;

  ComplexForm() = default;
  explicit ComplexForm(FormField r);
  ComplexForm(FormField r, FormField i) : re(std::move(r)), im(std::move(i)) {}
};

/// How J^*_c acts on r-forms.
enum class JStarConvention {
  /// precomposition of every argument with J_c (identity on 0-forms)
  Argumentwise,
  /// -(2J^* - pI)/sqrt(-disc) with J^* argumentwise; agrees with the first on
  /// 1-forms and makes the explicit d-bar formula an algebraic identity
  Affine,
  /// (-1)^{r(r-1)/2} times the argumentwise action on r-forms
  Graded,
};

const char* convention_name(JStarConvention c);
std::optional<JStarConvention> parse_convention(const std::string& name);

/// Metric, structure and conventions for the operators. The metric sign is
/// fixed from `reference` (det g keeps its sign on a connected chart).
class FormContext {
 public:
  FormContext(const Structure& s, std::span<const double> reference,
              JStarConvention conv = JStarConvention::Argumentwise);

  int dim() const { return s_.dim(); }
  const Structure& structure() const { return s_; }
  JStarConvention convention() const { return conv_; }
  double det_sign() const { return sign_; }
  /// sqrt|det g|
  const Expr& volume_factor() const { return vol_; }
  const EndoField& jc() const { return jc_; }

  FormField star(const FormField& a) const;
  /// Pointwise g-inner product; alpha ^ *beta = <alpha, beta> vol.
  Expr inner(const FormField& a, const FormField& b) const;
  FormField volume() const;

  FormField d(const FormField& a) const;  // zero past the top degree
  /// Literal * d *, no sign factor.
  FormField delta(const FormField& a) const;
  FormField jstar(const FormField& a) const;    // metallic J, argumentwise
  FormField jstar_c(const FormField& a) const;  // per convention
  FormField dc(const FormField& a) const;
  FormField delta_c(const FormField& a) const;
  FormField laplace(const FormField& a) const;
  FormField laplace_c(const FormField& a) const;

  ComplexForm dbar(const ComplexForm& a) const;
  ComplexForm dbarbar(const ComplexForm& a) const;
  /// (1/(2 disc))[disc d + i(4J^* d J^* - 2p d J^* - 2p J^* d + p^2 d)].
  ComplexForm dbar_explicit(const ComplexForm& a) const;
  /// The same with delta in place of d.
  ComplexForm dbarbar_explicit(const ComplexForm& a) const;

 private:
  Structure s_;
  JStarConvention conv_;
  double sign_ = 1;
  Expr vol_;
  EndoField jc_;
  EndoField ginv_;
};

enum class OperatorKind {
  D,
  DC,
  Delta,
  DeltaC,
  Star,
  JStarC,
  Laplace,
  LaplaceC,
  DBar,
  DBarBar,
  DBarExplicit,
};

const char* operator_name(OperatorKind k);
std::optional<OperatorKind> parse_operator(const std::string& name);

/// Applies an operator; real operators act on both parts.
ComplexForm apply_operator(OperatorKind kind, const FormContext& ctx, const ComplexForm& a);

/// Box with periodic identification and an N-point trapezoidal grid per axis.
struct Torus {
  Point lo;
  Point hi;
  int points = 64;
};

/// Integral of <a, b> sqrt|det g| over the torus.
double torus_pairing(const FormContext& ctx, const FormField& a, const FormField& b,
                     const Torus& torus);

struct ConformanceRow {
  std::string identity;
  double residual = 0;
  std::size_t evaluations = 0;
  bool holds = false;
};

struct ConformanceTable {
  JStarConvention convention = JStarConvention::Argumentwise;
  double tolerance = 1e-8;
  std::vector<ConformanceRow> rows;

  const ConformanceRow* find(const std::string& identity) const;
};

/// One row per printed identity. The adjointness and self-adjointness rows need
/// a torus; without one they are reported with evaluations = 0.
ConformanceTable identity_conformance(const FormContext& ctx, const std::vector<FormField>& forms,
                                      const std::vector<Point>& samples,
                                      const std::optional<Torus>& torus, double tol = 1e-8);

struct HarmonicReport {
  double laplace_c = 0;        // max |Delta^c a|
  double laplace = 0;          // max |Delta a|
  double laplace_of_jstar = 0; // max |Delta(J^*_c a)|
  double jc_of_laplace_c = 0;  // max |J^*_c Delta^c a| (transport of Delta^c a)
  double transport = 0;        // max |Delta^c a + J^*_c Delta J^*_c a|
  double invariance = 0;       // max |J^*_c a - a|
  double dc = 0;               // max |d^c a|
  double delta_c = 0;          // max |delta^c a|
  double tolerance = 1e-9;

  bool j_harmonic() const { return laplace_c < tolerance; }
  /// J-harmonic implies J^*_c a harmonic
  bool implication_holds() const { return !j_harmonic() || laplace_of_jstar < tolerance; }
  /// J-harmonic iff d^c-closed and delta^c-coclosed
  bool equivalence_holds() const {
    return j_harmonic() == (dc < tolerance && delta_c < tolerance);
  }
};

HarmonicReport harmonic_check(const FormContext& ctx, const FormField& a,
                              const std::vector<Point>& samples, double tol = 1e-9);

/// Max coefficient magnitude over samples.
double max_norm(const FormField& a, const std::vector<Point>& samples);
double max_norm(const ComplexForm& a, const std::vector<Point>& samples);

}  // namespace metallic
