#pragma once

#include <array>
#include <span>
#include <vector>

#include "metallic/fields.hpp"

namespace metallic {

/// Christoffel symbols as expressions, flattened as gamma[(k*n + i)*n + j]
/// for Gamma^k_{ij}.
class Christoffel {
 public:
  Christoffel() = default;
  Christoffel(int n, std::vector<Expr> gamma);

  static Christoffel of(const MetricField& g);

  int dim() const { return n_; }
  const Expr& operator()(int k, int i, int j) const {
    return gamma_[static_cast<std::size_t>((k * n_ + i) * n_ + j)];
  }
  /// Numeric values at a point in the same layout.
  std::vector<double> at(std::span<const double> pt) const;

 private:
  int n_ = 0;
  std::vector<Expr> gamma_;
};

/// Gamma^k_{ij}(pt); throws DegenerateMetricError for |det g| < 1e-12.
std::vector<double> christoffel(const MetricField& g, std::span<const double> pt);

Connection levi_civita(const MetricField& g);
/// (nabla_X Y)^k = X^i d_i Y^k + Gamma^k_{ij} X^i Y^j.
Connection coefficient_connection(const Christoffel& gamma);

template <class F>
F torsion(const BasicConnection<F>& nabla, const F& x, const F& y) {
  return nabla(x, y) - nabla(y, x) - lie_bracket(x, y);
}

/// (nabla_X A)Y = nabla_X(AY) - A(nabla_X Y).
template <class F, class Endo>
F nabla_endo(const BasicConnection<F>& nabla, const Endo& a, const F& x, const F& y) {
  return nabla(x, a.apply(y)) - a.apply(nabla(x, y));
}

/// (nabla_X g)(Y,Z) = X(g(Y,Z)) - g(nabla_X Y, Z) - g(Y, nabla_X Z).
Expr nabla_metric(const Connection& nabla, const MetricField& g, const VectorField& x,
                  const VectorField& y, const VectorField& z);
std::pair<Expr, Expr> nabla_metric(const ComplexConnection& nabla, const MetricField& g,
                                   const ComplexVectorField& x, const ComplexVectorField& y,
                                   const ComplexVectorField& z);

/// Fully covariant curvature R_{abcd} = R(d_a, d_b, d_c, d_d) at a point,
/// flattened row-major, with R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z
/// - nabla_[X,Y] Z and R(X,Y,Z,W) = g(R(X,Y)Z, W).
class RiemannTensor {
 public:
  RiemannTensor(const MetricField& g, std::span<const double> pt);

  int dim() const { return n_; }
  double operator()(int a, int b, int c, int d) const {
    return r_[static_cast<std::size_t>(((a * n_ + b) * n_ + c) * n_ + d)];
  }
  double apply(const Vec& x, const Vec& y, const Vec& z, const Vec& w) const;

 private:
  int n_;
  std::vector<double> r_;
};

double riemann(const MetricField& g, const VectorField& x, const VectorField& y,
               const VectorField& z, const VectorField& w, std::span<const double> pt);

/// K(X,Y) = R(X,Y,Y,X) / (g(X,X)g(Y,Y) - g(X,Y)^2).
double sectional_curvature(const MetricField& g, const VectorField& x, const VectorField& y,
                           std::span<const double> pt);

}  // namespace metallic
