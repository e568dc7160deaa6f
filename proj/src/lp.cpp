#include "mbasis/lp.hpp"

#include "mbasis/error.hpp"

#include <algorithm>
#include <limits>

namespace mbasis::lp {
namespace {

class Tableau {
 public:
  Tableau(Mat a, Vec b, std::vector<int> basis, int n_structural, double tol)
      : t_(a.rows(), a.cols() + 1), basis_(std::move(basis)),
        n_structural_(n_structural), tol_(tol), a_(std::move(a)), b_(std::move(b)) {
    t_.leftCols(a_.cols()) = a_;
    t_.col(a_.cols()) = b_;
    for (Eigen::Index i = 0; i < a_.rows(); ++i) row_ids_.push_back(static_cast<int>(i));
  }

  Eigen::Index cols() const { return t_.cols() - 1; }
  Eigen::Index rows() const { return t_.rows(); }

  // Bland's rule; columns >= allowed_cols never enter.
  Status optimize(const Vec& cost, Eigen::Index allowed_cols, int& pivots, int max_pivots) {
    while (true) {
      if (pivots >= max_pivots) return Status::IterationLimit;
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < allowed_cols; ++j) {
        double r = cost(j);
        for (Eigen::Index i = 0; i < rows(); ++i) r -= cost(basis_[i]) * t_(i, j);
        if (r < -tol_) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return Status::Optimal;

      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < rows(); ++i)
        if (t_(i, enter) > tol_) best = std::min(best, t_(i, cols()) / t_(i, enter));
      Eigen::Index leave = -1;
      for (Eigen::Index i = 0; i < rows(); ++i) {
        if (t_(i, enter) <= tol_) continue;
        if (t_(i, cols()) / t_(i, enter) > best + tol_) continue;
        if (leave < 0 || basis_[i] < basis_[leave]) leave = i;
      }
      if (leave < 0) return Status::Unbounded;
      pivot(leave, enter);
      ++pivots;
    }
  }

  void pivot(Eigen::Index r, Eigen::Index c) {
    t_.row(r) /= t_(r, c);
    for (Eigen::Index i = 0; i < rows(); ++i) {
      if (i == r) continue;
      const double factor = t_(i, c);
      if (factor != 0.0) t_.row(i) -= factor * t_.row(r);
    }
    basis_[r] = static_cast<int>(c);
  }

  // Pivots artificial columns (index >= first_artificial) out of the basis;
  // rows where that is impossible are redundant and are dropped.
  void expel_artificials(Eigen::Index first_artificial) {
    for (Eigen::Index i = 0; i < rows();) {
      if (basis_[i] < first_artificial) {
        ++i;
        continue;
      }
      Eigen::Index col = -1;
      for (Eigen::Index j = 0; j < first_artificial; ++j)
        if (std::abs(t_(i, j)) > tol_) {
          col = j;
          break;
        }
      if (col >= 0) {
        pivot(i, col);
        ++i;
      } else {
        drop_row(i);
      }
    }
  }

  // Basic solution, re-solved against the original rows for accuracy.
  Vec solution() const {
    Vec x = Vec::Zero(cols());
    const Eigen::Index m = rows();
    Mat basis_cols(m, m);
    Vec rhs(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      rhs(i) = b_(row_ids_[i]);
      for (Eigen::Index k = 0; k < m; ++k) basis_cols(i, k) = a_(row_ids_[i], basis_[k]);
    }
    Eigen::FullPivLU<Mat> lu(basis_cols);
    if (m > 0 && lu.isInvertible()) {
      const Vec xb = lu.solve(rhs);
      for (Eigen::Index k = 0; k < m; ++k) x(basis_[k]) = std::max(0.0, xb(k));
    } else {
      for (Eigen::Index k = 0; k < m; ++k) x(basis_[k]) = t_(k, cols());
    }
    return x;
  }

  double phase_one_residual(Eigen::Index first_artificial) const {
    double s = 0.0;
    for (Eigen::Index i = 0; i < rows(); ++i)
      if (basis_[i] >= first_artificial) s += t_(i, cols());
    return s;
  }

 private:
  void drop_row(Eigen::Index r) {
    const Eigen::Index m = rows();
    Mat t(m - 1, t_.cols());
    t << t_.topRows(r), t_.bottomRows(m - r - 1);
    t_ = std::move(t);
    basis_.erase(basis_.begin() + r);
    row_ids_.erase(row_ids_.begin() + r);
  }

  Mat t_;
  std::vector<int> basis_;
  std::vector<int> row_ids_;
  int n_structural_;
  double tol_;
  Mat a_;
  Vec b_;
};

}  // namespace

Solution solve(const Problem& problem, double pivot_tol) {
  const Eigen::Index n = problem.cost.size();
  const Eigen::Index n_eq = problem.eq.rows();
  const Eigen::Index n_le = problem.le.rows();
  if ((n_eq > 0 && problem.eq.cols() != n) || (n_le > 0 && problem.le.cols() != n))
    throw DimensionMismatch("lp constraint matrix", n, n_eq > 0 ? problem.eq.cols() : problem.le.cols());
  if (problem.eq_rhs.size() != n_eq || problem.le_rhs.size() != n_le)
    throw InvalidArgument("lp: right-hand side length does not match constraint rows");
  if (!problem.free.empty() && static_cast<Eigen::Index>(problem.free.size()) != n)
    throw InvalidArgument("lp: free-variable mask length does not match cost");

  // Split free variables into positive and negative parts.
  std::vector<Eigen::Index> pos(n), neg(n, -1);
  Eigen::Index n_split = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    pos[j] = n_split++;
    if (!problem.free.empty() && problem.free[j]) neg[j] = n_split++;
  }
  auto expand = [&](const Mat& m) {
    Mat out = Mat::Zero(m.rows(), n_split);
    for (Eigen::Index j = 0; j < n; ++j) {
      out.col(pos[j]) = m.col(j);
      if (neg[j] >= 0) out.col(neg[j]) = -m.col(j);
    }
    return out;
  };

  const Eigen::Index m = n_le + n_eq;
  Mat rows(m, n_split + n_le);
  rows.setZero();
  Vec rhs(m);
  if (n_le > 0) {
    rows.topLeftCorner(n_le, n_split) = expand(problem.le);
    rows.block(0, n_split, n_le, n_le).setIdentity();
    rhs.head(n_le) = problem.le_rhs;
  }
  if (n_eq > 0) {
    rows.bottomLeftCorner(n_eq, n_split) = expand(problem.eq);
    rhs.tail(n_eq) = problem.eq_rhs;
  }

  std::vector<int> basis(m, -1);
  std::vector<Eigen::Index> artificial_rows;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (rhs(i) < 0.0) {
      rows.row(i) *= -1.0;
      rhs(i) *= -1.0;
    }
    if (i < n_le && rows(i, n_split + i) > 0.0)
      basis[i] = static_cast<int>(n_split + i);
    else
      artificial_rows.push_back(i);
  }

  const Eigen::Index first_artificial = n_split + n_le;
  const auto n_art = static_cast<Eigen::Index>(artificial_rows.size());
  Mat a(m, first_artificial + n_art);
  a.leftCols(first_artificial) = rows;
  a.rightCols(n_art).setZero();
  for (Eigen::Index k = 0; k < n_art; ++k) {
    a(artificial_rows[k], first_artificial + k) = 1.0;
    basis[artificial_rows[k]] = static_cast<int>(first_artificial + k);
  }

  Tableau tab(a, rhs, basis, static_cast<int>(n_split), pivot_tol);
  Solution sol;
  const int max_pivots = 200 * static_cast<int>(m + a.cols() + 1);

  if (n_art > 0) {
    Vec phase1 = Vec::Zero(a.cols());
    phase1.tail(n_art).setOnes();
    const Status s = tab.optimize(phase1, a.cols(), sol.pivots, max_pivots);
    if (s == Status::IterationLimit) {
      sol.status = s;
      return sol;
    }
    const double scale = std::max(1.0, rhs.cwiseAbs().maxCoeff());
    if (tab.phase_one_residual(first_artificial) > 1e-9 * scale) {
      sol.status = Status::Infeasible;
      return sol;
    }
    tab.expel_artificials(first_artificial);
  }

  Vec cost = Vec::Zero(a.cols());
  cost.head(n_split) = expand(problem.cost.transpose()).transpose();
  sol.status = tab.optimize(cost, first_artificial, sol.pivots, max_pivots);
  if (sol.status != Status::Optimal) return sol;

  const Vec xs = tab.solution();
  sol.x.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    sol.x(j) = xs(pos[j]);
    if (neg[j] >= 0) sol.x(j) -= xs(neg[j]);
  }
  sol.objective = problem.cost.dot(sol.x);
  return sol;
}

}  // namespace mbasis::lp
