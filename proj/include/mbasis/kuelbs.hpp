#pragma once

#include "mbasis/linalg.hpp"
#include "mbasis/norms.hpp"
#include "mbasis/report.hpp"

#include <optional>
#include <span>
#include <vector>

namespace mbasis {

/// Hilbert inner product (u, v) = sum_n t_n u_n*(u) u_n*(v) on a
/// finite-dimensional normed space, realized by the Gram matrix
/// G = sum_n t_n u_n u_n^T. Immutable once built; see kuelbs_gram().
class HilbertStructure {
 public:
  const NormSpec& space() const { return space_; }
  const Vec& weights() const { return weights_; }
  const std::vector<Functional>& functionals() const { return functionals_; }
  const Mat& gram() const { return gram_; }

  double min_eigenvalue() const { return min_eigenvalue_; }
  /// Numerical rank of the functional family; G is definite iff it equals dim.
  int functional_rank() const { return functional_rank_; }
  bool definite() const { return functional_rank_ == space_.dim() && min_eigenvalue_ > 0.0; }

 private:
  friend HilbertStructure kuelbs_gram(const NormSpec&, std::span<const Functional>, const Vec&);
  HilbertStructure(NormSpec space, Vec weights, std::vector<Functional> fs, Mat gram)
      : space_(std::move(space)), weights_(std::move(weights)), functionals_(std::move(fs)),
        gram_(std::move(gram)) {}

  NormSpec space_;
  Vec weights_;
  std::vector<Functional> functionals_;
  Mat gram_;
  double min_eigenvalue_ = 0.0;
  int functional_rank_ = 0;
};

/// Duality mappings of the normalized inputs: u_n* = J(u_n / ||u_n||), so that
/// u_n*(u_n / ||u_n||) = 1 = ||u_n*||_*.
std::vector<Functional> build_duality_family(const NormSpec& space, std::span<const Vector> vectors);

/// t_n proportional to 2^-n (n = 1..m), renormalized to sum to one.
Vec geometric_weights(int m);
Vec uniform_weights(int m);

/// Requires t_n > 0, |sum t - 1| <= 1e-12 and one weight per functional.
HilbertStructure kuelbs_gram(const NormSpec& space, std::span<const Functional> functionals, const Vec& t);

double h_inner(const HilbertStructure& hs, const Vector& u, const Vector& v);
double h_norm(const HilbertStructure& hs, const Vector& u);

/// A nonzero u with h_norm(u) <= tol when G is singular, taken from the
/// eigenvector of the smallest eigenvalue.
std::optional<Vector> kernel_witness(const HilbertStructure& hs, double tol = 1e-8);

/// Audits ||u||_H <= ||u||_B over the samples. Every functional must satisfy
/// ||u_n*||_* <= 1 + tol, which the bound relies on; otherwise InvalidArgument.
///
/// Metrics: max_ratio (0 for no samples), min_eigenvalue, max_functional_dual_norm.
/// Checks: continuity_bound, positive_definite.
AuditReport check_continuity(const HilbertStructure& hs, std::span<const Vector> samples,
                             double tol = kClosedFormTol);

}  // namespace mbasis
