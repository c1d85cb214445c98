#include "metallic/fields.hpp"

#include <bit>
#include <cmath>
#include <unordered_map>

#include "metallic/errors.hpp"

namespace metallic {

Chart Chart::standard(int n) {
  Chart c;
  c.dim = n;
  for (int i = 0; i < n; ++i) c.names.push_back("x" + std::to_string(i + 1));
  c.periodic.assign(static_cast<std::size_t>(n), false);
  return c;
}

namespace {

void require_same_dim(int a, int b) {
  if (a != b)
    throw ShapeError("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
}

}  // namespace

// --- vector fields --------------------------------------------------------

VectorField VectorField::zero(int n) { return VectorField(std::vector<Expr>(static_cast<std::size_t>(n))); }

VectorField VectorField::coordinate(int n, int i) {
  if (i < 0 || i >= n) throw ShapeError("coordinate field index out of range");
  VectorField v = zero(n);
  v[i] = Expr(1.0);
  return v;
}

VectorField VectorField::constant(const Vec& v) {
  std::vector<Expr> c;
  for (Eigen::Index i = 0; i < v.size(); ++i) c.emplace_back(v(i));
  return VectorField(std::move(c));
}

Vec VectorField::at(Evaluator& ev) const {
  Vec v(dim());
  for (int i = 0; i < dim(); ++i) v(i) = ev((*this)[i]);
  return v;
}

Vec VectorField::at(std::span<const double> pt) const {
  Evaluator ev(pt);
  return at(ev);
}

VectorField operator+(const VectorField& a, const VectorField& b) {
  require_same_dim(a.dim(), b.dim());
  VectorField r = a;
  for (int i = 0; i < a.dim(); ++i) r[i] = a[i] + b[i];
  return r;
}

VectorField operator-(const VectorField& a, const VectorField& b) {
  require_same_dim(a.dim(), b.dim());
  VectorField r = a;
  for (int i = 0; i < a.dim(); ++i) r[i] = a[i] - b[i];
  return r;
}

VectorField operator-(const VectorField& a) {
  VectorField r = a;
  for (int i = 0; i < a.dim(); ++i) r[i] = -a[i];
  return r;
}

VectorField operator*(const Expr& f, const VectorField& a) {
  VectorField r = a;
  for (int i = 0; i < a.dim(); ++i) r[i] = f * a[i];
  return r;
}

// --- complex vector fields ------------------------------------------------

ComplexVectorField::ComplexVectorField(VectorField re, VectorField im)
    : re_(std::move(re)), im_(std::move(im)) {
  require_same_dim(re_.dim(), im_.dim());
}

ComplexVectorField::ComplexVectorField(const VectorField& re)
    : re_(re), im_(VectorField::zero(re.dim())) {}

ComplexVectorField ComplexVectorField::zero(int n) {
  return {VectorField::zero(n), VectorField::zero(n)};
}

ComplexVectorField ComplexVectorField::constant(const CVec& v) {
  return {VectorField::constant(v.real()), VectorField::constant(v.imag())};
}

ComplexVectorField ComplexVectorField::conj() const { return {re_, -im_}; }

CVec ComplexVectorField::at(Evaluator& ev) const {
  return re_.at(ev).cast<cplx>() + cplx(0.0, 1.0) * im_.at(ev).cast<cplx>();
}

CVec ComplexVectorField::at(std::span<const double> pt) const {
  Evaluator ev(pt);
  return at(ev);
}

ComplexVectorField operator+(const ComplexVectorField& a, const ComplexVectorField& b) {
  return {a.re() + b.re(), a.im() + b.im()};
}

ComplexVectorField operator-(const ComplexVectorField& a, const ComplexVectorField& b) {
  return {a.re() - b.re(), a.im() - b.im()};
}

ComplexVectorField operator-(const ComplexVectorField& a) { return {-a.re(), -a.im()}; }

ComplexVectorField operator*(const Expr& f, const ComplexVectorField& a) {
  return {f * a.re(), f * a.im()};
}

ComplexVectorField operator*(cplx s, const ComplexVectorField& a) {
  const Expr re(s.real());
  const Expr im(s.imag());
  return {re * a.re() - im * a.im(), re * a.im() + im * a.re()};
}

// --- endomorphisms --------------------------------------------------------

EndoField::EndoField(int n) : n_(n), m_(static_cast<std::size_t>(n * n)) {}

EndoField::EndoField(int n, std::vector<Expr> row_major) : n_(n), m_(std::move(row_major)) {
  if (m_.size() != static_cast<std::size_t>(n * n)) throw ShapeError("matrix is not square");
}

EndoField EndoField::identity(int n) {
  EndoField r(n);
  for (int i = 0; i < n; ++i) r(i, i) = Expr(1.0);
  return r;
}

EndoField EndoField::constant(const Mat& m) {
  if (m.rows() != m.cols()) throw ShapeError("matrix is not square");
  const int n = static_cast<int>(m.rows());
  EndoField r(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = Expr(m(i, j));
  return r;
}

EndoField EndoField::parse(const std::vector<std::vector<std::string>>& rows, int n) {
  if (static_cast<int>(rows.size()) != n)
    throw ShapeError("expected " + std::to_string(n) + " rows, got " + std::to_string(rows.size()));
  EndoField r(n);
  for (int i = 0; i < n; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (static_cast<int>(row.size()) != n)
      throw ShapeError("row " + std::to_string(i + 1) + " has " + std::to_string(row.size()) +
                       " entries, expected " + std::to_string(n));
    for (int j = 0; j < n; ++j) r(i, j) = metallic::parse(row[static_cast<std::size_t>(j)], n);
  }
  return r;
}

VectorField EndoField::apply(const VectorField& v) const {
  require_same_dim(n_, v.dim());
  VectorField r = VectorField::zero(n_);
  for (int i = 0; i < n_; ++i) {
    Expr s;
    for (int j = 0; j < n_; ++j) s += (*this)(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

ComplexVectorField EndoField::apply(const ComplexVectorField& v) const {
  return {apply(v.re()), apply(v.im())};
}

VectorField EndoField::column(int j) const {
  VectorField r = VectorField::zero(n_);
  for (int i = 0; i < n_; ++i) r[i] = (*this)(i, j);
  return r;
}

EndoField EndoField::transpose() const {
  EndoField r(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) r(i, j) = (*this)(j, i);
  return r;
}

bool EndoField::is_constant() const {
  for (const Expr& e : m_)
    if (!e.is_closed()) return false;
  return true;
}

Mat EndoField::at(Evaluator& ev) const {
  Mat m(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) m(i, j) = ev((*this)(i, j));
  return m;
}

Mat EndoField::at(std::span<const double> pt) const {
  Evaluator ev(pt);
  return at(ev);
}

EndoField operator+(const EndoField& a, const EndoField& b) {
  require_same_dim(a.dim(), b.dim());
  EndoField r(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) r(i, j) = a(i, j) + b(i, j);
  return r;
}

EndoField operator-(const EndoField& a, const EndoField& b) {
  require_same_dim(a.dim(), b.dim());
  EndoField r(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) r(i, j) = a(i, j) - b(i, j);
  return r;
}

EndoField operator*(const EndoField& a, const EndoField& b) {
  require_same_dim(a.dim(), b.dim());
  const int n = a.dim();
  EndoField r(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Expr s;
      for (int k = 0; k < n; ++k) s += a(i, k) * b(k, j);
      r(i, j) = s;
    }
  return r;
}

EndoField operator*(const Expr& f, const EndoField& a) {
  EndoField r(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) r(i, j) = f * a(i, j);
  return r;
}

ComplexEndoField::ComplexEndoField(EndoField re, EndoField im)
    : re_(std::move(re)), im_(std::move(im)) {
  require_same_dim(re_.dim(), im_.dim());
}

ComplexEndoField ComplexEndoField::conj() const { return {re_, Expr(-1.0) * im_}; }

ComplexVectorField ComplexEndoField::apply(const ComplexVectorField& v) const {
  return {re_.apply(v.re()) - im_.apply(v.im()), re_.apply(v.im()) + im_.apply(v.re())};
}

CMat ComplexEndoField::at(Evaluator& ev) const {
  return re_.at(ev).cast<cplx>() + cplx(0.0, 1.0) * im_.at(ev).cast<cplx>();
}

CMat ComplexEndoField::at(std::span<const double> pt) const {
  Evaluator ev(pt);
  return at(ev);
}

// --- metric ---------------------------------------------------------------

namespace {

// Laplace expansion memoized on the set of still-unused columns.
class Determinant {
 public:
  Determinant(const std::vector<int>& rows, const std::vector<int>& cols, const EndoField& a)
      : rows_(rows), cols_(cols), a_(a) {}

  Expr operator()() { return minor((1u << cols_.size()) - 1u); }

 private:
  Expr minor(unsigned mask) {
    if (mask == 0) return Expr(1.0);
    if (auto it = memo_.find(mask); it != memo_.end()) return it->second;
    const int row = rows_[cols_.size() - static_cast<std::size_t>(std::popcount(mask))];
    Expr sum;
    int sign = 1;
    for (std::size_t k = 0; k < cols_.size(); ++k) {
      if (!(mask & (1u << k))) continue;
      const Expr& entry = a_(row, cols_[k]);
      if (!entry.is_zero()) {
        const Expr term = entry * minor(mask & ~(1u << k));
        sum = sign > 0 ? sum + term : sum - term;
      }
      sign = -sign;
    }
    memo_.emplace(mask, sum);
    return sum;
  }

  std::vector<int> rows_;
  std::vector<int> cols_;
  const EndoField& a_;
  std::unordered_map<unsigned, Expr> memo_;
};

}  // namespace

struct MetricField::Cache {
  EndoField inverse;
  Expr det;
};

MetricField::MetricField(EndoField g) : g_(std::move(g)), cache_(std::make_shared<Cache>()) {
  for (int i = 0; i < dim(); ++i)
    for (int j = i + 1; j < dim(); ++j)
      if (g_(i, j).id() != g_(j, i).id() && g_(i, j).is_constant() && g_(j, i).is_constant() &&
          g_(i, j).value() != g_(j, i).value())
        throw ShapeError("metric is not symmetric");
  const int n = dim();
  if (g_.is_constant()) {
    const Mat m = g_.at(std::span<const double>());
    cache_->det = Expr(m.determinant());
    cache_->inverse = std::abs(m.determinant()) < kDegenerateMetric
                          ? EndoField(n)
                          : EndoField::constant(m.inverse());
    return;
  }
  std::vector<int> all(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
  cache_->det = simplify(Determinant(all, all, g_)());
  EndoField inv(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      // inv(i, j) = cofactor(j, i) / det
      std::vector<int> rows;
      std::vector<int> cols;
      for (int k = 0; k < n; ++k) {
        if (k != j) rows.push_back(k);
        if (k != i) cols.push_back(k);
      }
      const Expr minor = Determinant(rows, cols, g_)();
      const Expr cof = ((i + j) % 2 == 0) ? minor : -minor;
      inv(i, j) = simplify(cof / cache_->det);
    }
  cache_->inverse = std::move(inv);
}

MetricField MetricField::parse(const std::vector<std::vector<std::string>>& rows, int n) {
  return MetricField(EndoField::parse(rows, n));
}

MetricField MetricField::euclidean(int n) { return MetricField(EndoField::identity(n)); }

MetricField MetricField::diagonal(const std::vector<Expr>& d) {
  const int n = static_cast<int>(d.size());
  EndoField g(n);
  for (int i = 0; i < n; ++i) g(i, i) = d[static_cast<std::size_t>(i)];
  return MetricField(std::move(g));
}

const EndoField& MetricField::inverse() const {
  if (!cache_) throw ShapeError("empty metric");
  return cache_->inverse;
}

const Expr& MetricField::det() const {
  if (!cache_) throw ShapeError("empty metric");
  return cache_->det;
}

Expr MetricField::inner(const VectorField& x, const VectorField& y) const {
  require_same_dim(x.dim(), dim());
  require_same_dim(y.dim(), dim());
  Expr s;
  for (int i = 0; i < dim(); ++i)
    for (int j = 0; j < dim(); ++j)
      if (!g_(i, j).is_zero()) s += g_(i, j) * x[i] * y[j];
  return s;
}

std::pair<Expr, Expr> MetricField::inner(const ComplexVectorField& x,
                                         const ComplexVectorField& y) const {
  return {inner(x.re(), y.re()) - inner(x.im(), y.im()),
          inner(x.re(), y.im()) + inner(x.im(), y.re())};
}

void MetricField::require_nondegenerate(std::span<const double> pt) const {
  const double d = g_.at(pt).determinant();
  if (!(std::abs(d) >= kDegenerateMetric))
    throw DegenerateMetricError("degenerate metric: |det g| = " + std::to_string(std::abs(d)));
}

// --- derivatives of fields ------------------------------------------------

Expr directional(const VectorField& x, const Expr& f) {
  Expr s;
  for (int i = 0; i < x.dim(); ++i)
    if (!x[i].is_zero()) s += x[i] * diff(f, i);
  return s;
}

std::pair<Expr, Expr> directional(const ComplexVectorField& x,
                                  const std::pair<Expr, Expr>& f) {
  return {directional(x.re(), f.first) - directional(x.im(), f.second),
          directional(x.re(), f.second) + directional(x.im(), f.first)};
}

VectorField lie_bracket(const VectorField& x, const VectorField& y) {
  require_same_dim(x.dim(), y.dim());
  VectorField r = VectorField::zero(x.dim());
  for (int k = 0; k < x.dim(); ++k) r[k] = directional(x, y[k]) - directional(y, x[k]);
  return r;
}

ComplexVectorField lie_bracket(const ComplexVectorField& x, const ComplexVectorField& y) {
  return {lie_bracket(x.re(), y.re()) - lie_bracket(x.im(), y.im()),
          lie_bracket(x.re(), y.im()) + lie_bracket(x.im(), y.re())};
}

ComplexConnection complexify(const Connection& nabla) {
  return ComplexConnection(nabla.name() + " (complexified)",
                           [nabla](const ComplexVectorField& x, const ComplexVectorField& y) {
                             return ComplexVectorField(
                                 nabla(x.re(), y.re()) - nabla(x.im(), y.im()),
                                 nabla(x.re(), y.im()) + nabla(x.im(), y.re()));
                           });
}

}  // namespace metallic
