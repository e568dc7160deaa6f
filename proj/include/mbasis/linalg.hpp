#pragma once

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <vector>

namespace mbasis {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Point of a finite-dimensional normed space, in coordinates.
struct Vector {
  Vec coords;

  Vector() = default;
  explicit Vector(Vec c) : coords(std::move(c)) {}
  Vector(std::initializer_list<double> c)
      : coords(Eigen::Map<const Vec>(c.begin(), static_cast<Eigen::Index>(c.size()))) {}

  Eigen::Index dim() const { return coords.size(); }
};

/// Linear functional f(x) = coords . x, optionally carrying its dual norm.
struct Functional {
  Vec coords;
  std::optional<double> dual_norm_cache;

  Functional() = default;
  explicit Functional(Vec c, std::optional<double> cache = std::nullopt)
      : coords(std::move(c)), dual_norm_cache(cache) {}
  Functional(std::initializer_list<double> c)
      : coords(Eigen::Map<const Vec>(c.begin(), static_cast<Eigen::Index>(c.size()))) {}

  Eigen::Index dim() const { return coords.size(); }
  double operator()(const Vector& x) const;
};

/// Columns of the result are the given vectors.
Mat columns_of(std::span<const Vector> xs);
/// Rows of the result are the coordinate rows of the given functionals.
Mat rows_of(std::span<const Functional> fs);

/// Numerical rank: number of singular values above rel_tol * sigma_max.
/// A zero matrix has rank 0.
int numerical_rank(const Mat& m, double rel_tol = 1e-10);

/// Smallest eigenvalue of a symmetric matrix.
double min_eigenvalue(const Mat& sym);

/// Orthonormal basis (columns) of the null space of m.
Mat null_space(const Mat& m, double rel_tol = 1e-10);

}  // namespace mbasis
