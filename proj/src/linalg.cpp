#include "mbasis/linalg.hpp"

#include "mbasis/error.hpp"

namespace mbasis {

double Functional::operator()(const Vector& x) const {
  if (x.dim() != dim()) throw DimensionMismatch("functional evaluation", dim(), x.dim());
  return coords.dot(x.coords);
}

Mat columns_of(std::span<const Vector> xs) {
  if (xs.empty()) return Mat(0, 0);
  const auto d = xs.front().dim();
  Mat m(d, static_cast<Eigen::Index>(xs.size()));
  for (std::size_t j = 0; j < xs.size(); ++j) {
    if (xs[j].dim() != d) throw DimensionMismatch("vector list", d, xs[j].dim());
    m.col(static_cast<Eigen::Index>(j)) = xs[j].coords;
  }
  return m;
}

Mat rows_of(std::span<const Functional> fs) {
  if (fs.empty()) return Mat(0, 0);
  const auto d = fs.front().dim();
  Mat m(static_cast<Eigen::Index>(fs.size()), d);
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (fs[i].dim() != d) throw DimensionMismatch("functional list", d, fs[i].dim());
    m.row(static_cast<Eigen::Index>(i)) = fs[i].coords.transpose();
  }
  return m;
}

int numerical_rank(const Mat& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(m);
  const Vec& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s(k) > rel_tol * s(0)) ++r;
  return r;
}

double min_eigenvalue(const Mat& sym) {
  Eigen::SelfAdjointEigenSolver<Mat> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Mat null_space(const Mat& m, double rel_tol) {
  const auto n = m.cols();
  if (m.rows() == 0) return Mat::Identity(n, n);
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
  const Vec& s = svd.singularValues();
  int r = 0;
  if (s.size() > 0 && s(0) > 0.0)
    for (Eigen::Index k = 0; k < s.size(); ++k)
      if (s(k) > rel_tol * s(0)) ++r;
  return svd.matrixV().rightCols(n - r);
}

}  // namespace mbasis
