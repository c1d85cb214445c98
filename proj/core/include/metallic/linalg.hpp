#pragma once

#include <vector>

#include "metallic/fields.hpp"

namespace metallic {

/// Singular values above rel * (largest) count toward the rank.
inline constexpr double kRankTolerance = 1e-8;

int numerical_rank(const Mat& m, double rel = kRankTolerance);
int numerical_rank(const CMat& m, double rel = kRankTolerance);

/// Columns picked greedily by column-pivoted QR, as many as the numerical rank.
std::vector<int> pivot_columns(const Mat& m, double rel = kRankTolerance);
std::vector<int> pivot_columns(const CMat& m, double rel = kRankTolerance);

/// Orthonormal basis (columns) of the column space / null space.
Mat range_basis(const Mat& m, double rel = kRankTolerance);
Mat kernel_basis(const Mat& m, double rel = kRankTolerance);
CMat range_basis(const CMat& m, double rel = kRankTolerance);

/// Sine of the largest principal angle between span(a) and span(b), or 1 when
/// the dimensions differ. Both empty gives 0.
double subspace_distance(const Mat& a, const Mat& b);
double subspace_distance(const CMat& a, const CMat& b);

/// Largest eigenvalue-independent measure ||A||_F.
inline double fro(const Mat& m) { return m.norm(); }

}  // namespace metallic
