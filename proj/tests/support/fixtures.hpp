#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "metallic/structure.hpp"

namespace fixtures {

using metallic::Point;
using metallic::Structure;

struct Fixture {
  std::string name;
  Structure s;
  Point lo, hi;  // sampling box

  std::vector<Point> samples(int count, std::uint64_t seed = 0) const;
};

Fixture f1();
Fixture f2();
Fixture f3();
Fixture f4();
Fixture f5();
Fixture f6();
Fixture f7();

/// F6 scaled so that the sphere through `radius` e1 is sampled.
Point f6_point(double radius);

/// The F6 construction in R^3: D is tangent to round 2-spheres.
Fixture sphere3();
/// The same construction for the ellipsoids sum x_i^2/w_i = const in R^4,
/// w = (1, 2, 3, 5); the leaves have anisotropic curvature.
Fixture ellipsoids4();

/// J_{F4} conjugated by the hyperbolic rotation B(x1): a varying 2D Norden
/// structure on diag(1,-1).
Fixture norden_conjugated_2d();

// Hand-rolled generators for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi);
  Point point(const Point& lo, const Point& hi);
  /// Random polynomial of total degree <= 2 with small integer-ish coefficients.
  metallic::Expr poly(int n);
  /// Vector field with polynomial components.
  metallic::VectorField field(int n);
  metallic::Vec vec(int n);

 private:
  std::mt19937_64 rng_;
};

/// max_i |a_i - b_i| / max(1, |b|_inf)
double rel_err(const metallic::Vec& a, const metallic::Vec& b);

}  // namespace fixtures
