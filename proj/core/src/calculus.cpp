#include "metallic/calculus.hpp"

#include <cmath>

#include "metallic/errors.hpp"

namespace metallic {

Christoffel::Christoffel(int n, std::vector<Expr> gamma) : n_(n), gamma_(std::move(gamma)) {
  if (gamma_.size() != static_cast<std::size_t>(n * n * n))
    throw ShapeError("connection coefficients must have n^3 entries");
}

Christoffel Christoffel::of(const MetricField& g) {
  const int n = g.dim();
  const EndoField& inv = g.inverse();
  // first-kind symbols [ij,l] = (d_i g_jl + d_j g_il - d_l g_ij) / 2
  std::vector<Expr> first(static_cast<std::size_t>(n * n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l)
        first[static_cast<std::size_t>((i * n + j) * n + l)] =
            Expr(0.5) * (diff(g(j, l), i) + diff(g(i, l), j) - diff(g(i, j), l));
  std::vector<Expr> gamma(static_cast<std::size_t>(n * n * n));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Expr s;
        for (int l = 0; l < n; ++l)
          s += inv(k, l) * first[static_cast<std::size_t>((i * n + j) * n + l)];
        gamma[static_cast<std::size_t>((k * n + i) * n + j)] = simplify(s);
      }
  return Christoffel(n, std::move(gamma));
}

std::vector<double> Christoffel::at(std::span<const double> pt) const {
  Evaluator ev(pt);
  std::vector<double> out(gamma_.size());
  for (std::size_t k = 0; k < gamma_.size(); ++k) out[k] = ev(gamma_[k]);
  return out;
}

std::vector<double> christoffel(const MetricField& g, std::span<const double> pt) {
  g.require_nondegenerate(pt);
  return Christoffel::of(g).at(pt);
}

namespace {

bool all_zero(const Christoffel& gamma) {
  const int n = gamma.dim();
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (!gamma(k, i, j).is_zero()) return false;
  return true;
}

Connection make_coefficient_connection(std::string name, Christoffel gamma) {
  const bool flat = all_zero(gamma);
  return Connection(std::move(name), [gamma, flat](const VectorField& x, const VectorField& y) {
    const int n = gamma.dim();
    if (x.dim() != n || y.dim() != n) throw ShapeError("field dimension does not match chart");
    VectorField r = VectorField::zero(n);
    for (int k = 0; k < n; ++k) {
      Expr s = directional(x, y[k]);
      if (!flat)
        for (int i = 0; i < n; ++i) {
          if (x[i].is_zero()) continue;
          for (int j = 0; j < n; ++j)
            if (!y[j].is_zero() && !gamma(k, i, j).is_zero()) s += gamma(k, i, j) * x[i] * y[j];
        }
      r[k] = s;
    }
    return r;
  });
}

}  // namespace

Connection levi_civita(const MetricField& g) {
  return make_coefficient_connection("levi-civita", Christoffel::of(g));
}

Connection coefficient_connection(const Christoffel& gamma) {
  return make_coefficient_connection("coefficients", gamma);
}

Expr nabla_metric(const Connection& nabla, const MetricField& g, const VectorField& x,
                  const VectorField& y, const VectorField& z) {
  return directional(x, g.inner(y, z)) - g.inner(nabla(x, y), z) - g.inner(y, nabla(x, z));
}

std::pair<Expr, Expr> nabla_metric(const ComplexConnection& nabla, const MetricField& g,
                                   const ComplexVectorField& x, const ComplexVectorField& y,
                                   const ComplexVectorField& z) {
  const auto d = directional(x, g.inner(y, z));
  const auto a = g.inner(nabla(x, y), z);
  const auto b = g.inner(y, nabla(x, z));
  return {d.first - a.first - b.first, d.second - a.second - b.second};
}

RiemannTensor::RiemannTensor(const MetricField& g, std::span<const double> pt) : n_(g.dim()) {
  g.require_nondegenerate(pt);
  const int n = n_;
  const Christoffel gamma = Christoffel::of(g);
  Evaluator ev(pt);
  auto G = [&](int k, int i, int j) { return ev(gamma(k, i, j)); };
  auto dG = [&](int m, int k, int i, int j) { return ev(diff(gamma(k, i, j), m)); };
  const Mat gm = g.at(ev);
  // R^l_{abc}: R(d_a, d_b) d_c = R^l_{abc} d_l
  std::vector<double> up(static_cast<std::size_t>(n * n * n * n));
  for (int l = 0; l < n; ++l)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          double s = dG(a, l, b, c) - dG(b, l, a, c);
          for (int m = 0; m < n; ++m) s += G(l, a, m) * G(m, b, c) - G(l, b, m) * G(m, a, c);
          up[static_cast<std::size_t>(((l * n + a) * n + b) * n + c)] = s;
        }
  r_.assign(up.size(), 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double s = 0;
          for (int l = 0; l < n; ++l)
            s += up[static_cast<std::size_t>(((l * n + a) * n + b) * n + c)] * gm(l, d);
          r_[static_cast<std::size_t>(((a * n + b) * n + c) * n + d)] = s;
        }
}

double RiemannTensor::apply(const Vec& x, const Vec& y, const Vec& z, const Vec& w) const {
  double s = 0;
  for (int a = 0; a < n_; ++a) {
    if (x(a) == 0.0) continue;
    for (int b = 0; b < n_; ++b) {
      if (y(b) == 0.0) continue;
      for (int c = 0; c < n_; ++c)
        for (int d = 0; d < n_; ++d) s += (*this)(a, b, c, d) * x(a) * y(b) * z(c) * w(d);
    }
  }
  return s;
}

double riemann(const MetricField& g, const VectorField& x, const VectorField& y,
               const VectorField& z, const VectorField& w, std::span<const double> pt) {
  const RiemannTensor r(g, pt);
  Evaluator ev(pt);
  return r.apply(x.at(ev), y.at(ev), z.at(ev), w.at(ev));
}

double sectional_curvature(const MetricField& g, const VectorField& x, const VectorField& y,
                           std::span<const double> pt) {
  const RiemannTensor r(g, pt);
  Evaluator ev(pt);
  const Vec u = x.at(ev);
  const Vec v = y.at(ev);
  const Mat gm = g.at(ev);
  const double area = u.dot(gm * u) * v.dot(gm * v) - std::pow(u.dot(gm * v), 2);
  if (std::abs(area) < 1e-14) throw PreconditionError("sectional curvature of a degenerate plane");
  return r.apply(u, v, v, u) / area;
}

}  // namespace metallic
