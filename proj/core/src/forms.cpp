#include "metallic/forms.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "metallic/errors.hpp"
#include "metallic/norden.hpp"

namespace metallic {

namespace {

using Mask = FormField::Mask;

bool in_range(int n, int r) { return r >= 0 && r <= n; }

std::vector<int> bits(Mask m) {
  std::vector<int> out;
  for (int i = 0; m; ++i, m >>= 1)
    if (m & 1u) out.push_back(i);
  return out;
}

// Sign of the shuffle putting the indices of a before those of b.
double shuffle_sign(Mask a, Mask b) {
  int inv = 0;
  for (int j : bits(b)) inv += std::popcount(a >> (j + 1));
  return inv % 2 ? -1.0 : 1.0;
}

// det of the submatrix of m with the given rows and columns, by cofactors
// along the first row.
Expr minor_det(const EndoField& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  const std::size_t k = rows.size();
  if (k == 0) return Expr(1.0);
  if (k == 1) return m(rows[0], cols[0]);
  Expr det(0.0);
  std::vector<int> rest(rows.begin() + 1, rows.end());
  for (std::size_t j = 0; j < k; ++j) {
    const Expr& a = m(rows[0], cols[j]);
    if (a.is_zero()) continue;
    std::vector<int> sub;
    for (std::size_t c = 0; c < k; ++c)
      if (c != j) sub.push_back(cols[c]);
    const Expr t = a * minor_det(m, rest, sub);
    det = j % 2 ? det - t : det + t;
  }
  return det;
}

FormField scaled(double s, const FormField& a) { return Expr(s) * a; }

}  // namespace

std::vector<Mask> masks_of_degree(int n, int r) {
  std::vector<Mask> out;
  if (!in_range(n, r)) return out;
  for (Mask m = 0; m < (Mask(1) << n); ++m)
    if (std::popcount(m) == r) out.push_back(m);
  return out;
}

FormField::FormField(int dim, int degree) : n_(dim), r_(degree) {
  if (dim < 0 || dim > 16) throw ShapeError("form dimension out of range");
  if (degree < -1 || degree > dim + 1) throw ShapeError("form degree out of range");
}

FormField FormField::scalar(int dim, const Expr& f) {
  FormField a(dim, 0);
  a.set(0, f);
  return a;
}

FormField FormField::dx(int dim, int i) { return monomial(dim, Expr(1.0), {i}); }

FormField FormField::monomial(int dim, const Expr& f, const std::vector<int>& indices) {
  FormField a(dim, static_cast<int>(indices.size()));
  if (!in_range(dim, a.r_)) throw ShapeError("form degree exceeds dimension");
  Mask m = 0;
  double sign = 1;
  for (int i : indices) {
    if (i < 0 || i >= dim) throw ShapeError("form index out of range");
    const Mask bit = Mask(1) << i;
    if (m & bit) return FormField(dim, a.r_);
    sign *= shuffle_sign(m, bit);
    m |= bit;
  }
  a.set(m, sign < 0 ? -f : f);
  return a;
}

Expr FormField::coeff(Mask m) const {
  const auto it = c_.find(m);
  return it == c_.end() ? Expr(0.0) : it->second;
}

void FormField::set(Mask m, const Expr& e) {
  if (std::popcount(m) != r_ || (n_ < 32 && m >= (Mask(1) << n_)))
    throw ShapeError("multi-index does not match the form degree");
  if (e.is_zero())
    c_.erase(m);
  else
    c_[m] = e;
}

void FormField::add(Mask m, const Expr& e) { set(m, coeff(m) + e); }

Vec FormField::at(Evaluator& ev) const {
  const auto ms = masks_of_degree(n_, r_);
  Vec v = Vec::Zero(static_cast<Eigen::Index>(ms.size()));
  for (std::size_t k = 0; k < ms.size(); ++k) {
    const auto it = c_.find(ms[k]);
    if (it != c_.end()) v(static_cast<Eigen::Index>(k)) = ev(it->second);
  }
  return v;
}

Vec FormField::at(std::span<const double> pt) const {
  Evaluator ev(pt);
  return at(ev);
}

FormField operator+(const FormField& a, const FormField& b) {
  if (a.dim() != b.dim() || a.degree() != b.degree()) throw ShapeError("form shapes differ");
  FormField r = a;
  for (const auto& [m, e] : b.terms()) r.add(m, e);
  return r;
}

FormField operator-(const FormField& a) { return Expr(-1.0) * a; }
FormField operator-(const FormField& a, const FormField& b) { return a + (-b); }

FormField operator*(const Expr& f, const FormField& a) {
  FormField r(a.dim(), a.degree());
  if (f.is_zero()) return r;
  for (const auto& [m, e] : a.terms()) r.set(m, f * e);
  return r;
}

FormField wedge(const FormField& a, const FormField& b) {
  if (a.dim() != b.dim()) throw ShapeError("form dimensions differ");
  const int r = a.degree() + b.degree();
  if (r > a.dim()) throw ShapeError("wedge degree exceeds dimension");
  FormField out(a.dim(), r);
  for (const auto& [ma, ea] : a.terms())
    for (const auto& [mb, eb] : b.terms()) {
      if (ma & mb) continue;
      const Expr t = ea * eb;
      out.add(ma | mb, shuffle_sign(ma, mb) < 0 ? -t : t);
    }
  return out;
}

namespace {

FormField d_raw(const FormField& a) {
  const int n = a.dim();
  FormField out(n, std::min(a.degree() + 1, n + 1));
  if (!in_range(n, a.degree()) || a.degree() == n) return out;
  for (const auto& [m, e] : a.terms())
    for (int k = 0; k < n; ++k) {
      const Mask bit = Mask(1) << k;
      if (m & bit) continue;
      const Expr dk = diff(e, k);
      if (dk.is_zero()) continue;
      out.add(m | bit, shuffle_sign(bit, m) < 0 ? -dk : dk);
    }
  return out;
}

}  // namespace

FormField exterior_d(const FormField& a) {
  if (a.degree() >= a.dim()) throw ShapeError("d of a top-degree form");
  return d_raw(a);
}

FormField pullback(const EndoField& A, const FormField& a) {
  if (A.dim() != a.dim()) throw ShapeError("endomorphism and form dimensions differ");
  FormField out(a.dim(), a.degree());
  if (!in_range(a.dim(), a.degree())) return out;
  const auto ms = masks_of_degree(a.dim(), a.degree());
  for (Mask i : ms) {
    Expr c(0.0);
    for (const auto& [k, e] : a.terms()) c += e * minor_det(A, bits(k), bits(i));
    out.set(i, c);
  }
  return out;
}

ComplexForm::ComplexForm(FormField r) : re(std::move(r)), im(re.dim(), re.degree()) {}

const char* convention_name(JStarConvention c) {
  switch (c) {
    case JStarConvention::Argumentwise: return "argumentwise";
    case JStarConvention::Affine: return "affine";
    case JStarConvention::Graded: return "graded";
  }
  return "";
}

std::optional<JStarConvention> parse_convention(const std::string& name) {
  for (auto c : {JStarConvention::Argumentwise, JStarConvention::Affine, JStarConvention::Graded})
    if (name == convention_name(c)) return c;
  return std::nullopt;
}

FormContext::FormContext(const Structure& s, std::span<const double> reference,
                         JStarConvention conv)
    : s_(s), conv_(conv) {
  s_.g.require_nondegenerate(reference);
  const Expr det = s_.g.det();
  sign_ = eval(det, reference) < 0 ? -1.0 : 1.0;
  vol_ = sqrt(Expr(sign_) * det);
  ginv_ = s_.g.inverse();
  if (s_.params.disc() < 0) jc_ = norden_jc(s_.J, s_.params);
}

FormField FormContext::star(const FormField& a) const {
  const int n = dim();
  FormField out(n, std::clamp(n - a.degree(), -1, n + 1));
  if (!in_range(n, a.degree())) return out;
  const Mask full = (Mask(1) << n) - 1;
  for (Mask i : masks_of_degree(n, a.degree())) {
    Expr up(0.0);
    for (const auto& [k, e] : a.terms()) up += minor_det(ginv_, bits(i), bits(k)) * e;
    if (up.is_zero()) continue;
    const Mask c = full & ~i;
    const Expr t = vol_ * up;
    out.add(c, shuffle_sign(i, c) < 0 ? -t : t);
  }
  return out;
}

Expr FormContext::inner(const FormField& a, const FormField& b) const {
  if (a.degree() != b.degree()) throw ShapeError("inner product of forms of different degree");
  Expr r(0.0);
  for (const auto& [i, ea] : a.terms())
    for (const auto& [k, eb] : b.terms()) r += ea * minor_det(ginv_, bits(i), bits(k)) * eb;
  return r;
}

FormField FormContext::volume() const {
  FormField v(dim(), dim());
  v.set((Mask(1) << dim()) - 1, vol_);
  return v;
}

FormField FormContext::d(const FormField& a) const { return d_raw(a); }
FormField FormContext::delta(const FormField& a) const { return star(d(star(a))); }
FormField FormContext::jstar(const FormField& a) const { return pullback(s_.J, a); }

FormField FormContext::jstar_c(const FormField& a) const {
  if (s_.params.disc() >= 0)
    throw PreconditionError("J_c needs p^2+4q < 0, got " + std::to_string(s_.params.disc()));
  if (conv_ == JStarConvention::Argumentwise) return pullback(jc_, a);
  if (conv_ == JStarConvention::Graded) {
    const int r = a.degree();
    return (r * (r - 1) / 2) % 2 ? -pullback(jc_, a) : pullback(jc_, a);
  }
  const double r = std::sqrt(-s_.params.disc());
  return scaled(-2.0 / r, jstar(a)) + scaled(s_.params.p / r, a);
}

FormField FormContext::dc(const FormField& a) const { return jstar_c(d(jstar_c(a))); }
FormField FormContext::delta_c(const FormField& a) const { return star(dc(star(a))); }
FormField FormContext::laplace(const FormField& a) const { return d(delta(a)) + delta(d(a)); }
FormField FormContext::laplace_c(const FormField& a) const {
  return dc(delta_c(a)) + delta_c(dc(a));
}

namespace {

// (1/2)(D - i C) on a + ib: ((Da + Cb) + i(Db - Ca))/2.
template <class Dop, class Cop>
ComplexForm half_combination(const ComplexForm& a, Dop D, Cop C) {
  return {scaled(0.5, D(a.re) + C(a.im)), scaled(0.5, D(a.im) - C(a.re))};
}

}  // namespace

ComplexForm FormContext::dbar(const ComplexForm& a) const {
  return half_combination(a, [&](const FormField& x) { return d(x); },
                          [&](const FormField& x) { return dc(x); });
}

ComplexForm FormContext::dbarbar(const ComplexForm& a) const {
  return half_combination(a, [&](const FormField& x) { return delta(x); },
                          [&](const FormField& x) { return delta_c(x); });
}

namespace {

// d + i K with K = (1/(2 disc))(4J*DJ* - 2p DJ* - 2p J*D + p^2 D); the real
// part of the printed bracket is disc D/(2 disc) = D/2.
template <class Dop>
ComplexForm explicit_combination(const FormContext& ctx, const ComplexForm& a, Dop D) {
  const double p = ctx.structure().params.p;
  const double disc = ctx.structure().params.disc();
  if (disc >= 0) throw PreconditionError("d-bar needs p^2+4q < 0");
  auto K = [&](const FormField& x) {
    const FormField dx = D(x);
    const FormField t = scaled(4.0, ctx.jstar(D(ctx.jstar(x)))) - scaled(2 * p, D(ctx.jstar(x))) -
                        scaled(2 * p, ctx.jstar(dx)) + scaled(p * p, dx);
    return scaled(1.0 / (2 * disc), t);
  };
  return {scaled(0.5, D(a.re)) - K(a.im), K(a.re) + scaled(0.5, D(a.im))};
}

}  // namespace

ComplexForm FormContext::dbar_explicit(const ComplexForm& a) const {
  return explicit_combination(*this, a, [&](const FormField& x) { return d(x); });
}

ComplexForm FormContext::dbarbar_explicit(const ComplexForm& a) const {
  return explicit_combination(*this, a, [&](const FormField& x) { return delta(x); });
}

const char* operator_name(OperatorKind k) {
  switch (k) {
    case OperatorKind::D: return "d";
    case OperatorKind::DC: return "dc";
    case OperatorKind::Delta: return "delta";
    case OperatorKind::DeltaC: return "delta_c";
    case OperatorKind::Star: return "star";
    case OperatorKind::JStarC: return "jstar_c";
    case OperatorKind::Laplace: return "laplace";
    case OperatorKind::LaplaceC: return "laplace_c";
    case OperatorKind::DBar: return "dbar";
    case OperatorKind::DBarBar: return "dbarbar";
    case OperatorKind::DBarExplicit: return "dbar_explicit";
  }
  return "";
}

std::optional<OperatorKind> parse_operator(const std::string& name) {
  for (int k = 0; k <= static_cast<int>(OperatorKind::DBarExplicit); ++k) {
    const auto kind = static_cast<OperatorKind>(k);
    if (name == operator_name(kind)) return kind;
  }
  return std::nullopt;
}

ComplexForm apply_operator(OperatorKind kind, const FormContext& ctx, const ComplexForm& a) {
  auto both = [&](auto op) { return ComplexForm(op(a.re), op(a.im)); };
  switch (kind) {
    case OperatorKind::D: return both([&](const FormField& x) { return ctx.d(x); });
    case OperatorKind::DC: return both([&](const FormField& x) { return ctx.dc(x); });
    case OperatorKind::Delta: return both([&](const FormField& x) { return ctx.delta(x); });
    case OperatorKind::DeltaC: return both([&](const FormField& x) { return ctx.delta_c(x); });
    case OperatorKind::Star: return both([&](const FormField& x) { return ctx.star(x); });
    case OperatorKind::JStarC: return both([&](const FormField& x) { return ctx.jstar_c(x); });
    case OperatorKind::Laplace: return both([&](const FormField& x) { return ctx.laplace(x); });
    case OperatorKind::LaplaceC: return both([&](const FormField& x) { return ctx.laplace_c(x); });
    case OperatorKind::DBar: return ctx.dbar(a);
    case OperatorKind::DBarBar: return ctx.dbarbar(a);
    case OperatorKind::DBarExplicit: return ctx.dbar_explicit(a);
  }
  throw PreconditionError("unknown operator");
}

double max_norm(const FormField& a, const std::vector<Point>& samples) {
  double m = 0;
  if (a.terms().empty()) return 0;
  for (const Point& pt : samples) {
    const Vec v = a.at(pt);
    if (v.size()) m = std::max(m, v.cwiseAbs().maxCoeff());
  }
  return m;
}

double max_norm(const ComplexForm& a, const std::vector<Point>& samples) {
  return std::max(max_norm(a.re, samples), max_norm(a.im, samples));
}

double torus_pairing(const FormContext& ctx, const FormField& a, const FormField& b,
                     const Torus& torus) {
  const int n = ctx.dim();
  if (static_cast<int>(torus.lo.size()) != n || static_cast<int>(torus.hi.size()) != n)
    throw ShapeError("torus box does not match the dimension");
  if (torus.points < 1) throw PreconditionError("torus grid needs points");
  const Expr integrand = ctx.inner(a, b) * ctx.volume_factor();
  if (integrand.is_zero()) return 0;
  double weight = 1;
  for (int k = 0; k < n; ++k)
    weight *= (torus.hi[static_cast<std::size_t>(k)] - torus.lo[static_cast<std::size_t>(k)]) /
              torus.points;
  // Row sums first, then pairwise over rows, so the order is fixed.
  std::vector<double> partial;
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  Point pt(static_cast<std::size_t>(n));
  std::size_t total = 1;
  for (int k = 0; k < n; ++k) total *= static_cast<std::size_t>(torus.points);
  double row = 0;
  for (std::size_t c = 0; c < total; ++c) {
    std::size_t rem = c;
    for (int k = n - 1; k >= 0; --k) {
      const auto kk = static_cast<std::size_t>(k);
      const auto j = rem % static_cast<std::size_t>(torus.points);
      rem /= static_cast<std::size_t>(torus.points);
      pt[kk] = torus.lo[kk] + (torus.hi[kk] - torus.lo[kk]) * static_cast<double>(j) / torus.points;
    }
    row += eval(integrand, pt);
    if ((c + 1) % static_cast<std::size_t>(torus.points) == 0) {
      partial.push_back(row);
      row = 0;
    }
  }
  while (partial.size() > 1) {
    std::vector<double> next;
    for (std::size_t i = 0; i + 1 < partial.size(); i += 2) next.push_back(partial[i] + partial[i + 1]);
    if (partial.size() % 2) next.push_back(partial.back());
    partial.swap(next);
  }
  return weight * (partial.empty() ? 0 : partial.front());
}

const ConformanceRow* ConformanceTable::find(const std::string& identity) const {
  for (const ConformanceRow& r : rows)
    if (r.identity == identity) return &r;
  return nullptr;
}

ConformanceTable identity_conformance(const FormContext& ctx, const std::vector<FormField>& forms,
                                      const std::vector<Point>& samples,
                                      const std::optional<Torus>& torus, double tol) {
  if (ctx.structure().params.disc() >= 0)
    throw PreconditionError("conformance needs p^2+4q < 0");
  ConformanceTable t;
  t.convention = ctx.convention();
  t.tolerance = tol;
  using F = FormField;
  auto row = [&](const std::string& name, auto residual) {
    ConformanceRow r;
    r.identity = name;
    for (const F& a : forms) {
      r.residual = std::max(r.residual, max_norm(residual(a), samples));
      r.evaluations += samples.size();
    }
    r.holds = r.residual < tol;
    t.rows.push_back(r);
  };
  auto crow = [&](const std::string& name, auto residual) {
    ConformanceRow r;
    r.identity = name;
    for (const F& a : forms) {
      r.residual = std::max(r.residual, max_norm(residual(ComplexForm(a)), samples));
      r.evaluations += samples.size();
    }
    r.holds = r.residual < tol;
    t.rows.push_back(r);
  };
  auto sub = [](const ComplexForm& a, const ComplexForm& b) {
    return ComplexForm(a.re - b.re, a.im - b.im);
  };
  const auto& c = ctx;

  row("d^c o d^c = 0", [&](const F& a) { return c.dc(c.dc(a)); });
  row("d o d^c + d^c o d = 0", [&](const F& a) { return c.d(c.dc(a)) + c.dc(c.d(a)); });
  row("delta^c o delta^c = 0", [&](const F& a) { return c.delta_c(c.delta_c(a)); });
  row("delta o delta^c + delta^c o delta = 0",
      [&](const F& a) { return c.delta(c.delta_c(a)) + c.delta_c(c.delta(a)); });

  auto pairing_row = [&](const std::string& name, int shift, auto lhs, auto rhs) {
    ConformanceRow r;
    r.identity = name;
    if (torus) {
      for (const F& a : forms)
        for (const F& b : forms) {
          if (b.degree() != a.degree() + shift) continue;
          r.residual = std::max(r.residual, std::abs(torus_pairing(c, lhs(a), b, *torus) -
                                                     torus_pairing(c, a, rhs(b), *torus)));
          ++r.evaluations;
        }
    }
    r.holds = r.evaluations > 0 && r.residual < tol;
    t.rows.push_back(r);
  };
  pairing_row("<d^c a, b> = <a, delta^c b>", 1, [&](const F& a) { return c.dc(a); },
              [&](const F& b) { return c.delta_c(b); });

  row("delta^c = J*_c o delta o J*_c",
      [&](const F& a) { return c.delta_c(a) - c.jstar_c(c.delta(c.jstar_c(a))); });
  row("d^c o J*_c = -J*_c o d",
      [&](const F& a) { return c.dc(c.jstar_c(a)) + c.jstar_c(c.d(a)); });
  row("J*_c o d^c = -d o J*_c",
      [&](const F& a) { return c.jstar_c(c.dc(a)) + c.d(c.jstar_c(a)); });
  row("delta^c o J*_c = -J*_c o delta",
      [&](const F& a) { return c.delta_c(c.jstar_c(a)) + c.jstar_c(c.delta(a)); });
  row("J*_c o delta^c = -delta o J*_c",
      [&](const F& a) { return c.jstar_c(c.delta_c(a)) + c.delta(c.jstar_c(a)); });

  pairing_row("<Delta^c a, b> = <a, Delta^c b>", 0, [&](const F& a) { return c.laplace_c(a); },
              [&](const F& b) { return c.laplace_c(b); });
  row("Delta^c = -J*_c o Delta o J*_c",
      [&](const F& a) { return c.laplace_c(a) + c.jstar_c(c.laplace(c.jstar_c(a))); });
  row("Delta^c o J*_c = J*_c o Delta",
      [&](const F& a) { return c.laplace_c(c.jstar_c(a)) - c.jstar_c(c.laplace(a)); });
  row("J*_c o Delta^c = Delta o J*_c",
      [&](const F& a) { return c.jstar_c(c.laplace_c(a)) - c.laplace(c.jstar_c(a)); });

  crow("dbar o dbar = 0", [&](const ComplexForm& a) { return c.dbar(c.dbar(a)); });
  crow("dbarbar o dbarbar = 0", [&](const ComplexForm& a) { return c.dbarbar(c.dbarbar(a)); });
  row("J* o star = star o J*",
      [&](const F& a) { return c.jstar(c.star(a)) - c.star(c.jstar(a)); });
  row("J*_c o star = star o J*_c",
      [&](const F& a) { return c.jstar_c(c.star(a)) - c.star(c.jstar_c(a)); });
  crow("dbar = explicit J* form",
       [&](const ComplexForm& a) { return sub(c.dbar(a), c.dbar_explicit(a)); });
  crow("dbarbar = explicit J* form",
       [&](const ComplexForm& a) { return sub(c.dbarbar(a), c.dbarbar_explicit(a)); });
  return t;
}

HarmonicReport harmonic_check(const FormContext& ctx, const FormField& a,
                              const std::vector<Point>& samples, double tol) {
  if (ctx.structure().params.disc() >= 0) throw PreconditionError("J-harmonicity needs p^2+4q < 0");
  HarmonicReport r;
  r.tolerance = tol;
  const FormField lc = ctx.laplace_c(a);
  const FormField ja = ctx.jstar_c(a);
  r.laplace_c = max_norm(lc, samples);
  r.laplace = max_norm(ctx.laplace(a), samples);
  r.laplace_of_jstar = max_norm(ctx.laplace(ja), samples);
  r.jc_of_laplace_c = max_norm(ctx.jstar_c(lc), samples);
  r.transport = max_norm(lc + ctx.jstar_c(ctx.laplace(ja)), samples);
  r.invariance = max_norm(ja - a, samples);
  r.dc = max_norm(ctx.dc(a), samples);
  r.delta_c = max_norm(ctx.delta_c(a), samples);
  return r;
}

}  // namespace metallic
