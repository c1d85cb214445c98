#include "metallic/sampling.hpp"

#include "metallic/errors.hpp"

namespace metallic {

namespace {

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

}  // namespace

double halton(std::uint64_t index, int base) {
  double f = 1.0;
  double r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % static_cast<std::uint64_t>(base));
    index /= static_cast<std::uint64_t>(base);
  }
  return r;
}

std::vector<Point> halton_points(const Point& lo, const Point& hi, int count, std::uint64_t seed) {
  if (lo.size() != hi.size()) throw ShapeError("sampling box corners differ in dimension");
  if (lo.size() > std::size(kPrimes)) throw ShapeError("sampling supports at most 16 dimensions");
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int k = 0; k < count; ++k) {
    Point p(lo.size());
    for (std::size_t i = 0; i < lo.size(); ++i)
      p[i] = lo[i] + (hi[i] - lo[i]) * halton(seed + static_cast<std::uint64_t>(k) + 1, kPrimes[i]);
    pts.push_back(std::move(p));
  }
  return pts;
}

}  // namespace metallic
