#include "mbasis/norms.hpp"

#include "mbasis/error.hpp"
#include "mbasis/lp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mbasis {
namespace {

void check_exponent(double p) {
  if (std::isnan(p) || p < 1.0)
    throw InvalidArgument("norm exponent must satisfy p >= 1 or p = inf, got " + std::to_string(p));
}

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

void check_dim(const NormSpec& space, Eigen::Index d, const char* what) {
  if (d != space.dim()) throw DimensionMismatch(what, space.dim(), d);
}

// Minimum Euclidean norm point in the convex hull of the columns of pts
// (Wolfe's algorithm). Returns the barycentric weights.
Vec min_norm_point_weights(const Mat& pts) {
  const Eigen::Index k = pts.cols();
  const double eps = 1e-14 * std::max(1.0, pts.colwise().squaredNorm().maxCoeff());
  Eigen::Index start = 0;
  pts.colwise().squaredNorm().minCoeff(&start);
  std::vector<Eigen::Index> active{start};
  Vec lambda = Vec::Zero(k);
  lambda(start) = 1.0;
  Vec x = pts.col(start);

  for (int outer = 0; outer < 100 * static_cast<int>(k) + 10; ++outer) {
    Eigen::Index j = 0;
    (pts.transpose() * x).minCoeff(&j);
    if (x.squaredNorm() - x.dot(pts.col(j)) <= eps) break;
    if (std::find(active.begin(), active.end(), j) != active.end()) break;
    active.push_back(j);

    while (true) {
      const auto s = static_cast<Eigen::Index>(active.size());
      Mat kkt = Mat::Zero(s + 1, s + 1);
      for (Eigen::Index a = 0; a < s; ++a) {
        for (Eigen::Index b = 0; b < s; ++b) kkt(a, b) = pts.col(active[a]).dot(pts.col(active[b]));
        kkt(a, s) = 1.0;
        kkt(s, a) = 1.0;
      }
      Vec rhs = Vec::Zero(s + 1);
      rhs(s) = 1.0;
      const Vec sol = kkt.completeOrthogonalDecomposition().solve(rhs);
      const Vec alpha = sol.head(s);

      if ((alpha.array() > 1e-15).all()) {
        lambda.setZero();
        for (Eigen::Index a = 0; a < s; ++a) lambda(active[a]) = alpha(a);
        x = pts * lambda;
        break;
      }
      double theta = 1.0;
      for (Eigen::Index a = 0; a < s; ++a) {
        const double l = lambda(active[a]);
        if (alpha(a) <= 1e-15 && l - alpha(a) > 0.0) theta = std::min(theta, l / (l - alpha(a)));
      }
      for (Eigen::Index a = 0; a < s; ++a)
        lambda(active[a]) = lambda(active[a]) + theta * (alpha(a) - lambda(active[a]));
      std::vector<Eigen::Index> kept;
      for (auto a : active) {
        if (lambda(a) > 1e-15)
          kept.push_back(a);
        else
          lambda(a) = 0.0;
      }
      active = std::move(kept);
      lambda /= lambda.sum();
      x = pts * lambda;
    }
  }
  return lambda;
}

}  // namespace

std::string_view to_string(NormKind kind) {
  switch (kind) {
    case NormKind::PNorm: return "pnorm";
    case NormKind::WeightedPNorm: return "weighted_pnorm";
    case NormKind::Polyhedral: return "polyhedral";
  }
  return "unknown";
}

NormSpec NormSpec::pnorm(int dim, double p) {
  if (dim < 1) throw InvalidArgument("dimension must be positive");
  check_exponent(p);
  NormSpec s;
  s.dim_ = dim;
  s.kind_ = NormKind::PNorm;
  s.p_ = p;
  s.weights_ = Vec::Ones(dim);
  s.scale_ = Vec::Ones(dim);
  return s;
}

NormSpec NormSpec::weighted_pnorm(double p, Vec weights) {
  if (weights.size() < 1) throw InvalidArgument("dimension must be positive");
  check_exponent(p);
  if (!(weights.array() > 0.0).all() || !weights.allFinite())
    throw InvalidArgument("weights must be finite and strictly positive");
  NormSpec s;
  s.dim_ = static_cast<int>(weights.size());
  s.kind_ = NormKind::WeightedPNorm;
  s.p_ = p;
  s.scale_ = std::isinf(p) ? weights : Vec(weights.array().pow(1.0 / p));
  s.weights_ = std::move(weights);
  return s;
}

NormSpec NormSpec::polyhedral(Mat rows) {
  if (rows.cols() < 1) throw InvalidArgument("dimension must be positive");
  if (!rows.allFinite()) throw InvalidArgument("polyhedral matrix has non-finite entries");
  if (rows.rows() < rows.cols())
    throw InvalidArgument("polyhedral matrix needs at least dim rows");
  if (numerical_rank(rows, 1e-12) != rows.cols())
    throw InvalidArgument("polyhedral matrix must have full column rank");
  NormSpec s;
  s.dim_ = static_cast<int>(rows.cols());
  s.kind_ = NormKind::Polyhedral;
  s.p_ = kInf;
  s.rows_ = std::move(rows);
  return s;
}

bool NormSpec::is_piecewise_linear() const {
  return kind_ == NormKind::Polyhedral || p_ == 1.0 || std::isinf(p_);
}

double NormSpec::default_tolerance() const {
  return kind_ == NormKind::Polyhedral ? kIterativeTol : kClosedFormTol;
}

bool NormSpec::operator==(const NormSpec& o) const {
  if (dim_ != o.dim_ || kind_ != o.kind_) return false;
  if (kind_ == NormKind::Polyhedral) return rows_ == o.rows_;
  return p_ == o.p_ && weights_ == o.weights_;
}

double conjugate_exponent(double p) {
  check_exponent(p);
  if (p == 1.0) return kInf;
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

double lp_norm(const Vec& v, double p) {
  if (v.size() == 0) return 0.0;
  const double m = v.cwiseAbs().maxCoeff();
  if (std::isinf(p) || m == 0.0) return m;
  if (p == 1.0) return v.cwiseAbs().sum();
  if (p == 2.0) return v.stableNorm();
  return m * std::pow((v.cwiseAbs() / m).array().pow(p).sum(), 1.0 / p);
}

double norm(const NormSpec& space, const Vector& x) {
  check_dim(space, x.dim(), "norm");
  if (space.kind() == NormKind::Polyhedral) return (space.rows() * x.coords).cwiseAbs().maxCoeff();
  return lp_norm(space.scale().cwiseProduct(x.coords), space.p());
}

DualNormResult dual_norm_certified(const NormSpec& space, const Functional& f) {
  check_dim(space, f.dim(), "dual_norm");
  const int d = space.dim();
  DualNormResult out;

  if (space.kind() == NormKind::Polyhedral) {
    // max f.x  s.t.  -1 <= A x <= 1
    const Mat& a = space.rows();
    lp::Problem prob;
    prob.cost = -f.coords;
    prob.le.resize(2 * a.rows(), d);
    prob.le << a, -a;
    prob.le_rhs = Vec::Ones(2 * a.rows());
    prob.free.assign(d, true);
    const lp::Solution sol = lp::solve(prob);
    if (sol.status != lp::Status::Optimal)
      throw Infeasible("dual norm LP did not reach an optimum; polyhedral norm rows are malformed");
    out.value = std::max(0.0, -sol.objective);
    out.maximizer = Vector(sol.x);
    return out;
  }

  // ||f||_* = ||f ./ s||_q; maximizer y in the scaled space, x = y ./ s.
  const Vec g = f.coords.cwiseQuotient(space.scale());
  const double q = conjugate_exponent(space.p());
  out.value = lp_norm(g, q);
  Vec y = Vec::Zero(d);
  if (out.value == 0.0) {
    y(0) = 1.0;
  } else if (std::isinf(q)) {
    Eigen::Index k = 0;
    g.cwiseAbs().maxCoeff(&k);
    y(k) = sign(g(k));
  } else if (q == 1.0) {
    for (int k = 0; k < d; ++k) y(k) = sign(g(k));
  } else {
    for (int k = 0; k < d; ++k)
      y(k) = sign(g(k)) * std::pow(std::abs(g(k)) / out.value, q - 1.0);
  }
  out.maximizer = Vector(y.cwiseQuotient(space.scale()));
  return out;
}

double dual_norm(const NormSpec& space, const Functional& f) {
  return dual_norm_certified(space, f).value;
}

Functional with_dual_norm(const NormSpec& space, Functional f) {
  f.dual_norm_cache = dual_norm(space, f);
  return f;
}

Functional duality_map(const NormSpec& space, const Vector& u) {
  check_dim(space, u.dim(), "duality_map");
  const double nu = norm(space, u);
  if (nu == 0.0) throw InvalidArgument("duality_map: zero vector has no duality mapping");
  const int d = space.dim();
  constexpr double kTie = 1e-12;

  if (space.kind() == NormKind::Polyhedral) {
    // Subdifferential of the norm at u: hull of sgn(a_k.u) a_k over active rows.
    const Vec vals = space.rows() * u.coords;
    std::vector<Eigen::Index> act;
    for (Eigen::Index k = 0; k < vals.size(); ++k)
      if (std::abs(vals(k)) >= nu * (1.0 - kTie)) act.push_back(k);
    Mat pts(d, static_cast<Eigen::Index>(act.size()));
    for (std::size_t c = 0; c < act.size(); ++c)
      pts.col(static_cast<Eigen::Index>(c)) = sign(vals(act[c])) * space.rows().row(act[c]).transpose();
    const Vec w = min_norm_point_weights(pts);
    return Functional(nu * (pts * w), nu);
  }

  // Work in y = s .* u, where the norm is plain l_p; u* = s .* y*.
  const Vec& s = space.scale();
  const Vec y = s.cwiseProduct(u.coords);
  const double p = space.p();
  Vec ystar(d);
  if (p == 1.0) {
    for (int k = 0; k < d; ++k) ystar(k) = nu * sign(y(k));
  } else if (std::isinf(p)) {
    // Hull of s_k sgn(u_k) e_k over active k; minimal Euclidean norm weights
    // are proportional to 1 / s_k^2.
    Vec w = Vec::Zero(d);
    for (int k = 0; k < d; ++k)
      if (std::abs(y(k)) >= nu * (1.0 - kTie)) w(k) = 1.0 / (s(k) * s(k));
    w /= w.sum();
    for (int k = 0; k < d; ++k) ystar(k) = nu * w(k) * sign(y(k));
  } else {
    for (int k = 0; k < d; ++k)
      ystar(k) = sign(y(k)) * std::pow(std::abs(y(k)) / nu, p - 1.0) * nu;
  }
  return Functional(s.cwiseProduct(ystar), nu);
}

}  // namespace mbasis
