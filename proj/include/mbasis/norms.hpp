#pragma once

#include "mbasis/linalg.hpp"

#include <limits>
#include <string_view>

namespace mbasis {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Default tolerance for closed-form paths.
inline constexpr double kClosedFormTol = 1e-9;
/// Default tolerance for LP and iterative paths.
inline constexpr double kIterativeTol = 1e-6;

enum class NormKind { PNorm, WeightedPNorm, Polyhedral };

std::string_view to_string(NormKind kind);

/// A finite-dimensional real normed space.
///
/// Three families are supported:
///   - pnorm:          ||x|| = (sum |x_k|^p)^(1/p), or max |x_k| for p = inf
///   - weighted_pnorm: ||x|| = (sum w_k |x_k|^p)^(1/p), or max w_k |x_k| for p = inf
///   - polyhedral:     ||x|| = max_k |a_k . x| over the rows a_k of a full
///                     column rank matrix A
///
/// p = inf is stored as a true infinity. Instances are immutable.
class NormSpec {
 public:
  /// Zero-dimensional placeholder; use the factories below.
  NormSpec() = default;

  static NormSpec pnorm(int dim, double p);
  static NormSpec weighted_pnorm(double p, Vec weights);
  static NormSpec polyhedral(Mat rows);

  int dim() const { return dim_; }
  NormKind kind() const { return kind_; }
  /// Exponent of the p families; meaningless for polyhedral.
  double p() const { return p_; }
  const Vec& weights() const { return weights_; }
  const Mat& rows() const { return rows_; }

  /// True for the p families: the norm is ||diag(scale) x||_p.
  bool is_p_family() const { return kind_ != NormKind::Polyhedral; }
  /// Per-coordinate scale s with ||x|| = ||s .* x||_p (p families only).
  const Vec& scale() const { return scale_; }

  /// True when the dual norm and extension problems go through the LP path
  /// (p in {1, inf} or polyhedral).
  bool is_piecewise_linear() const;

  /// Tolerance matching the accuracy of this space's dual-norm path.
  double default_tolerance() const;

  bool operator==(const NormSpec& other) const;

 private:
  int dim_ = 0;
  NormKind kind_ = NormKind::PNorm;
  double p_ = 2.0;
  Vec weights_;
  Mat rows_;
  Vec scale_;
};

/// Hoelder conjugate: 1/p + 1/q = 1, with 1 <-> inf.
double conjugate_exponent(double p);

/// Plain l_p norm of a coordinate vector, overflow-safe for large p.
double lp_norm(const Vec& v, double p);

double norm(const NormSpec& space, const Vector& x);

struct DualNormResult {
  double value = 0.0;
  /// x with norm(x) <= 1 (up to rounding) and f(x) = value.
  Vector maximizer;
};

/// sup { f(x) : ||x|| <= 1 } together with a maximizer.
DualNormResult dual_norm_certified(const NormSpec& space, const Functional& f);
double dual_norm(const NormSpec& space, const Functional& f);

/// Copy of f with its dual-norm cache filled in.
Functional with_dual_norm(const NormSpec& space, Functional f);

/// Duality mapping: u* with u*(u) = ||u||^2 and ||u*||_* = ||u||.
///
/// Where the mapping is set-valued (p in {1, inf}, polyhedral) the element of
/// minimal Euclidean norm is returned.
Functional duality_map(const NormSpec& space, const Vector& u);

}  // namespace mbasis
