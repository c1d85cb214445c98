#include "fixtures.hpp"

#include <algorithm>
#include <cmath>

#include "metallic/sampling.hpp"

namespace fixtures {

using namespace metallic;

namespace {

EndoField endo(const std::vector<std::vector<std::string>>& rows, int n) {
  return EndoField::parse(rows, n);
}

MetricField metric(const std::vector<std::vector<std::string>>& rows, int n) {
  return MetricField::parse(rows, n);
}

// Rotation of the golden reflection part: R(t) [[1,1],[1,0]] R(t)^T.
std::vector<std::vector<std::string>> golden_block(const std::string& t) {
  const std::string c = "cos(2*" + t + ")";
  const std::string s = "sin(2*" + t + ")";
  return {{"1/2 + 1/2*" + c + " - " + s, "1/2*" + s + " + " + c},
          {"1/2*" + s + " + " + c, "1/2 - 1/2*" + c + " + " + s}};
}

}  // namespace

std::vector<Point> Fixture::samples(int count, std::uint64_t seed) const {
  return halton_points(lo, hi, count, seed);
}

Fixture f1() {
  return {"F1",
          Structure(MetricField::euclidean(2), endo({{"1", "1"}, {"1", "0"}}, 2), {1, 1}),
          {-1, -1},
          {1, 1}};
}

Fixture f2() {
  return {"F2", Structure(MetricField::euclidean(2), endo(golden_block("x1"), 2), {1, 1}),
          {-1.5, -1.5}, {1.5, 1.5}};
}

Fixture f3() {
  const auto b = golden_block("x3");
  const std::vector<std::vector<std::string>> rows = {
      {b[0][0], b[0][1], "0"}, {b[1][0], b[1][1], "0"}, {"0", "0", "(1 - sqrt(5))/2"}};
  return {"F3", Structure(MetricField::euclidean(3), endo(rows, 3), {1, 1}), {-1, -1, -1},
          {1, 1, 1}};
}

Fixture f4() {
  return {"F4",
          Structure(metric({{"1", "0"}, {"0", "-1"}}, 2),
                    endo({{"1/2", "sqrt(3)/2"}, {"-sqrt(3)/2", "1/2"}}, 2), {1, -1}),
          {-1, -1},
          {1, 1}};
}

Fixture f5() {
  Fixture f = f4();
  f.name = "F5";
  f.lo = {0, 0};
  f.hi = {2 * M_PI, 2 * M_PI};
  return f;
}

Fixture f6() {
  std::vector<std::vector<std::string>> rows(4, std::vector<std::string>(4));
  const std::string r2 = "(x1^2 + x2^2 + x3^2 + x4^2)";
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const std::string xi = "x" + std::to_string(i + 1);
      const std::string xj = "x" + std::to_string(j + 1);
      std::string e = "sqrt(5)*" + xi + "*" + xj + "/" + r2;
      if (i == j) e = "(1 - sqrt(5))/2 + " + e;
      rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = e;
    }
  return {"F6", Structure(MetricField::euclidean(4), endo(rows, 4), {1, 1}),
          {0.3, 0.3, 0.3, 0.3}, {1.2, 1.2, 1.2, 1.2}};
}

Point f6_point(double radius) { return {radius, 0, 0, 0}; }

namespace {

// sigma_- I + sqrt(5) n n^T with n = grad(phi)/|grad(phi)| for
// phi = sum x_i^2 / w_i: leaves of D are the level sets of phi.
Structure level_set_structure(const std::vector<double>& w) {
  const int n = static_cast<int>(w.size());
  auto comp = [&](int i) {
    return "(x" + std::to_string(i + 1) + "/" + std::to_string(w[static_cast<std::size_t>(i)]) + ")";
  };
  std::string r2 = "(";
  for (int i = 0; i < n; ++i) r2 += (i ? " + " : "") + comp(i) + "^2";
  r2 += ")";
  std::vector<std::vector<std::string>> rows(static_cast<std::size_t>(n),
                                             std::vector<std::string>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::string e = "sqrt(5)*" + comp(i) + "*" + comp(j) + "/" + r2;
      if (i == j) e = "(1 - sqrt(5))/2 + " + e;
      rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = e;
    }
  return Structure(MetricField::euclidean(n), EndoField::parse(rows, n), {1, 1});
}

}  // namespace

Fixture sphere3() {
  return {"F6-3d", level_set_structure({1, 1, 1}), {0.3, 0.3, 0.3}, {1.2, 1.2, 1.2}};
}

Fixture ellipsoids4() {
  return {"ellipsoids", level_set_structure({1, 2, 3, 5}), {0.3, 0.3, 0.3, 0.3},
          {1.2, 1.2, 1.2, 1.2}};
}

Fixture f7() {
  const std::string a = "sqrt(3)/2";
  const std::vector<std::vector<std::string>> rows = {
      {"1/2", a, "0", "0"},
      {"-" + a, "1/2", "0", "0"},
      {"0", "0", "1/2 - " + a + "*sinh(2*x1)", a + "*cosh(2*x1)"},
      {"0", "0", "-" + a + "*cosh(2*x1)", "1/2 + " + a + "*sinh(2*x1)"}};
  const auto g = metric(
      {{"1", "0", "0", "0"}, {"0", "-1", "0", "0"}, {"0", "0", "1", "0"}, {"0", "0", "0", "-1"}}, 4);
  return {"F7", Structure(g, endo(rows, 4), {1, -1}), {-0.8, -0.8, -0.8, -0.8},
          {0.8, 0.8, 0.8, 0.8}};
}

Fixture norden_conjugated_2d() {
  const std::string a = "sqrt(3)/2";
  return {"F4-conjugated",
          Structure(metric({{"1", "0"}, {"0", "-1"}}, 2),
                    endo({{"1/2 - " + a + "*sinh(2*x1)", a + "*cosh(2*x1)"},
                          {"-" + a + "*cosh(2*x1)", "1/2 + " + a + "*sinh(2*x1)"}},
                         2),
                    {1, -1}),
          {-1, -1},
          {1, 1}};
}

double Gen::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng_);
}

Point Gen::point(const Point& lo, const Point& hi) {
  Point p(lo.size());
  for (std::size_t i = 0; i < lo.size(); ++i) p[i] = uniform(lo[i], hi[i]);
  return p;
}

Expr Gen::poly(int n) {
  auto coef = [&] { return std::round(uniform(-3, 3) * 4) / 4; };
  Expr e = coef();
  for (int i = 0; i < n; ++i) {
    e += Expr(coef()) * Expr::coord(i);
    if (uniform(0, 1) < 0.5) {
      const int j = static_cast<int>(uniform(0, n - 1e-9));
      e += Expr(coef()) * Expr::coord(i) * Expr::coord(j);
    }
  }
  return e;
}

VectorField Gen::field(int n) {
  std::vector<Expr> c;
  for (int i = 0; i < n; ++i) c.push_back(poly(n));
  return VectorField(std::move(c));
}

Vec Gen::vec(int n) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = uniform(-1, 1);
  return v;
}

double rel_err(const Vec& a, const Vec& b) {
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

}  // namespace fixtures
