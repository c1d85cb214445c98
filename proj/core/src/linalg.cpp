#include "metallic/linalg.hpp"

#include <algorithm>

namespace metallic {

namespace {

template <class M>
int rank_of(const M& m, double rel) {
  if (m.size() == 0) return 0;
  const Eigen::JacobiSVD<M> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) <= 1e-300) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel * s(0)) ++r;
  return r;
}

template <class M>
std::vector<int> pivots_of(const M& m, double rel) {
  const int r = rank_of(m, rel);
  if (r == 0) return {};
  const Eigen::ColPivHouseholderQR<M> qr(m);
  const auto& perm = qr.colsPermutation().indices();
  std::vector<int> cols;
  for (int k = 0; k < r; ++k) cols.push_back(perm(k));
  return cols;
}

template <class M>
M range_of(const M& m, double rel) {
  const int r = rank_of(m, rel);
  if (r == 0) return M(m.rows(), 0);
  const Eigen::JacobiSVD<M> svd(m, Eigen::ComputeFullU);
  return svd.matrixU().leftCols(r);
}

template <class M>
double distance_of(const M& a, const M& b) {
  const M qa = range_of(a, kRankTolerance);
  const M qb = range_of(b, kRankTolerance);
  if (qa.cols() != qb.cols()) return 1.0;
  if (qa.cols() == 0) return 0.0;
  // residual of projecting qa onto span(qb); its norm is sin of the largest angle
  const M resid = qa - qb * (qb.adjoint() * qa);
  const Eigen::JacobiSVD<M> svd(resid);
  return std::min(1.0, svd.singularValues()(0));
}

}  // namespace

int numerical_rank(const Mat& m, double rel) { return rank_of(m, rel); }
int numerical_rank(const CMat& m, double rel) { return rank_of(m, rel); }
std::vector<int> pivot_columns(const Mat& m, double rel) { return pivots_of(m, rel); }
std::vector<int> pivot_columns(const CMat& m, double rel) { return pivots_of(m, rel); }
Mat range_basis(const Mat& m, double rel) { return range_of(m, rel); }
CMat range_basis(const CMat& m, double rel) { return range_of(m, rel); }

Mat kernel_basis(const Mat& m, double rel) {
  const int n = static_cast<int>(m.cols());
  const int r = rank_of(m, rel);
  if (r == n) return Mat(n, 0);
  const Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
  return svd.matrixV().rightCols(n - r);
}

double subspace_distance(const Mat& a, const Mat& b) { return distance_of(a, b); }
double subspace_distance(const CMat& a, const CMat& b) { return distance_of(a, b); }

}  // namespace metallic
