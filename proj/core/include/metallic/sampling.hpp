#pragma once

#include <cstdint>
#include <vector>

#include "metallic/fields.hpp"

namespace metallic {

/// Radical inverse of `index` in `base`.
double halton(std::uint64_t index, int base);

/// `count` Halton points in the box [lo, hi], starting at sequence index
/// `seed + 1` so seed 0 skips the origin corner.
std::vector<Point> halton_points(const Point& lo, const Point& hi, int count,
                                 std::uint64_t seed = 0);

}  // namespace metallic
