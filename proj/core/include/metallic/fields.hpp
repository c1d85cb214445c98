#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "metallic/expr.hpp"

namespace metallic {

using Point = std::vector<double>;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using cplx = std::complex<double>;

struct Chart {
  int dim = 0;
  std::vector<std::string> names;
  std::vector<bool> periodic;

  static Chart standard(int n);
};

class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(std::vector<Expr> components) : c_(std::move(components)) {}

  static VectorField zero(int n);
  /// The coordinate field d/dx_{i+1}.
  static VectorField coordinate(int n, int i);
  static VectorField constant(const Vec& v);

  int dim() const { return static_cast<int>(c_.size()); }
  const Expr& operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  Expr& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
  const std::vector<Expr>& components() const { return c_; }

  Vec at(Evaluator& ev) const;
  Vec at(std::span<const double> pt) const;

 private:
  std::vector<Expr> c_;
};

VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a);
VectorField operator*(const Expr& f, const VectorField& a);

/// Complex vector field stored as a pair of real fields.
class ComplexVectorField {
 public:
  ComplexVectorField() = default;
  ComplexVectorField(VectorField re, VectorField im);
  explicit ComplexVectorField(const VectorField& re);

  static ComplexVectorField zero(int n);
  static ComplexVectorField constant(const CVec& v);

  int dim() const { return re_.dim(); }
  const VectorField& re() const { return re_; }
  const VectorField& im() const { return im_; }
  ComplexVectorField conj() const;

  CVec at(Evaluator& ev) const;
  CVec at(std::span<const double> pt) const;

 private:
  VectorField re_;
  VectorField im_;
};

ComplexVectorField operator+(const ComplexVectorField& a, const ComplexVectorField& b);
ComplexVectorField operator-(const ComplexVectorField& a, const ComplexVectorField& b);
ComplexVectorField operator-(const ComplexVectorField& a);
ComplexVectorField operator*(const Expr& f, const ComplexVectorField& a);
ComplexVectorField operator*(cplx s, const ComplexVectorField& a);

/// n x n matrix of expressions, row = output index.
class EndoField {
 public:
  EndoField() = default;
  explicit EndoField(int n);
  EndoField(int n, std::vector<Expr> row_major);

  static EndoField identity(int n);
  static EndoField constant(const Mat& m);
  /// Rows of expression text, one string per entry.
  static EndoField parse(const std::vector<std::vector<std::string>>& rows, int n);

  int dim() const { return n_; }
  const Expr& operator()(int i, int j) const { return m_[idx(i, j)]; }
  Expr& operator()(int i, int j) { return m_[idx(i, j)]; }

  VectorField apply(const VectorField& v) const;
  ComplexVectorField apply(const ComplexVectorField& v) const;
  VectorField column(int j) const;
  EndoField transpose() const;
  bool is_constant() const;

  Mat at(Evaluator& ev) const;
  Mat at(std::span<const double> pt) const;

 private:
  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i * n_ + j); }
  int n_ = 0;
  std::vector<Expr> m_;
};

EndoField operator+(const EndoField& a, const EndoField& b);
EndoField operator-(const EndoField& a, const EndoField& b);
EndoField operator*(const EndoField& a, const EndoField& b);
EndoField operator*(const Expr& f, const EndoField& a);

/// A + iB with real expression matrices A, B.
class ComplexEndoField {
 public:
  ComplexEndoField() = default;
  ComplexEndoField(EndoField re, EndoField im);

  int dim() const { return re_.dim(); }
  const EndoField& re() const { return re_; }
  const EndoField& im() const { return im_; }
  ComplexEndoField conj() const;

  ComplexVectorField apply(const ComplexVectorField& v) const;
  CMat at(Evaluator& ev) const;
  CMat at(std::span<const double> pt) const;

 private:
  EndoField re_;
  EndoField im_;
};

/// Symmetric nondegenerate bilinear form with expression entries.
class MetricField {
 public:
  MetricField() = default;
  explicit MetricField(EndoField g);

  static MetricField parse(const std::vector<std::vector<std::string>>& rows, int n);
  static MetricField euclidean(int n);
  static MetricField diagonal(const std::vector<Expr>& d);

  int dim() const { return g_.dim(); }
  const Expr& operator()(int i, int j) const { return g_(i, j); }
  const EndoField& matrix() const { return g_; }

  /// Symbolic inverse g^{ij} and determinant, computed on construction.
  const EndoField& inverse() const;
  const Expr& det() const;

  Expr inner(const VectorField& x, const VectorField& y) const;
  /// Complex-bilinear extension: g(X1,X2) - g(Y1,Y2) + i(g(X1,Y2) + g(Y1,X2)).
  std::pair<Expr, Expr> inner(const ComplexVectorField& x, const ComplexVectorField& y) const;

  Mat at(Evaluator& ev) const { return g_.at(ev); }
  Mat at(std::span<const double> pt) const { return g_.at(pt); }

  /// Throws DegenerateMetricError when |det g(pt)| < 1e-12.
  void require_nondegenerate(std::span<const double> pt) const;

 private:
  EndoField g_;
  struct Cache;
  std::shared_ptr<Cache> cache_;
};

inline constexpr double kDegenerateMetric = 1e-12;

/// X(f) = sum_i X^i d_i f.
Expr directional(const VectorField& x, const Expr& f);
std::pair<Expr, Expr> directional(const ComplexVectorField& x, const std::pair<Expr, Expr>& f);

VectorField lie_bracket(const VectorField& x, const VectorField& y);
ComplexVectorField lie_bracket(const ComplexVectorField& x, const ComplexVectorField& y);

/// Covariant-derivative rule acting on whole fields. F is VectorField or
/// ComplexVectorField.
template <class F>
class BasicConnection {
 public:
  using Rule = std::function<F(const F&, const F&)>;

  BasicConnection() = default;
  BasicConnection(std::string name, Rule rule) : name_(std::move(name)), rule_(std::move(rule)) {}

  F operator()(const F& x, const F& y) const { return rule_(x, y); }
  const std::string& name() const { return name_; }

 private:
  std::string name_;
  Rule rule_;
};

using Connection = BasicConnection<VectorField>;
using ComplexConnection = BasicConnection<ComplexVectorField>;

/// Extends a real connection complex-bilinearly.
ComplexConnection complexify(const Connection& nabla);

}  // namespace metallic
