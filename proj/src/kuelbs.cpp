#include "mbasis/kuelbs.hpp"

#include "mbasis/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mbasis {

std::vector<Functional> build_duality_family(const NormSpec& space, std::span<const Vector> vectors) {
  std::vector<Functional> out;
  out.reserve(vectors.size());
  for (std::size_t n = 0; n < vectors.size(); ++n) {
    const double nu = norm(space, vectors[n]);
    if (nu == 0.0) throw InvalidArgument("build_duality_family: vector " + std::to_string(n) + " is zero");
    Functional f = duality_map(space, Vector(vectors[n].coords / nu));
    f.dual_norm_cache = 1.0;
    out.push_back(std::move(f));
  }
  return out;
}

Vec geometric_weights(int m) {
  if (m < 1) throw InvalidArgument("geometric_weights: need at least one weight");
  Vec t(m);
  for (int n = 0; n < m; ++n) t(n) = std::ldexp(1.0, -(n + 1));
  return t / t.sum();
}

Vec uniform_weights(int m) {
  if (m < 1) throw InvalidArgument("uniform_weights: need at least one weight");
  return Vec::Constant(m, 1.0 / m);
}

HilbertStructure kuelbs_gram(const NormSpec& space, std::span<const Functional> functionals, const Vec& t) {
  if (functionals.empty()) throw InvalidArgument("kuelbs_gram: need at least one functional");
  if (static_cast<Eigen::Index>(functionals.size()) != t.size())
    throw InvalidArgument("kuelbs_gram: " + std::to_string(functionals.size()) + " functionals but " +
                          std::to_string(t.size()) + " weights");
  if (!(t.array() > 0.0).all() || !t.allFinite())
    throw InvalidArgument("kuelbs_gram: weights must be strictly positive");
  if (std::abs(t.sum() - 1.0) > 1e-12)
    throw InvalidArgument("kuelbs_gram: weights sum to " + format_double(t.sum()) + ", expected 1");
  for (const auto& f : functionals)
    if (f.dim() != space.dim()) throw DimensionMismatch("kuelbs_gram functional", space.dim(), f.dim());

  const Mat u = rows_of(functionals);
  Mat g = u.transpose() * t.asDiagonal() * u;
  g = 0.5 * (g + g.transpose()).eval();

  HilbertStructure hs(space, t, {functionals.begin(), functionals.end()}, g);
  hs.min_eigenvalue_ = min_eigenvalue(g);
  hs.functional_rank_ = numerical_rank(u);
  return hs;
}

double h_inner(const HilbertStructure& hs, const Vector& u, const Vector& v) {
  const int d = hs.space().dim();
  if (u.dim() != d) throw DimensionMismatch("h_inner", d, u.dim());
  if (v.dim() != d) throw DimensionMismatch("h_inner", d, v.dim());
  return u.coords.dot(hs.gram() * v.coords);
}

namespace {

/// Rows sqrt(t_n) u_n*, so that G = R^T R.
Mat weighted_rows(const HilbertStructure& hs) {
  return hs.weights().cwiseSqrt().asDiagonal() * rows_of(hs.functionals());
}

}  // namespace

double h_norm(const HilbertStructure& hs, const Vector& u) {
  if (u.dim() != hs.space().dim()) throw DimensionMismatch("h_norm", hs.space().dim(), u.dim());
  // sqrt(sum t_n u_n*(u)^2) keeps full relative accuracy near the kernel,
  // where the quadratic form u^T G u would lose half the digits.
  const Vec values = weighted_rows(hs) * u.coords;
  return values.norm();
}

std::optional<Vector> kernel_witness(const HilbertStructure& hs, double tol) {
  const Mat r = weighted_rows(hs);
  const int d = hs.space().dim();
  const Mat v = Eigen::JacobiSVD<Mat>(r, Eigen::ComputeFullV).matrixV();
  Vector w(Vec(v.col(d - 1)));
  if (h_norm(hs, w) <= tol) return w;
  return std::nullopt;
}

AuditReport check_continuity(const HilbertStructure& hs, std::span<const Vector> samples, double tol) {
  const NormSpec& space = hs.space();
  const double fn_tol = std::max(tol, space.default_tolerance());
  double max_dual = 0.0;
  for (std::size_t n = 0; n < hs.functionals().size(); ++n) {
    const double dn = dual_norm(space, hs.functionals()[n]);
    if (dn > 1.0 + fn_tol)
      throw InvalidArgument("check_continuity: functional " + std::to_string(n) + " has dual norm " +
                            format_double(dn) + " > 1; the continuity bound does not apply");
    max_dual = std::max(max_dual, dn);
  }

  AuditReport rep("continuity");
  double max_ratio = 0.0;
  double max_excess = -kInf;
  for (const auto& u : samples) {
    const double nb = norm(space, u);
    const double nh = h_norm(hs, u);
    max_excess = std::max(max_excess, nh - nb);
    if (nb > 0.0) max_ratio = std::max(max_ratio, nh / nb);
  }
  rep.set_metric("sample_count", static_cast<double>(samples.size()));
  rep.set_metric("max_ratio", max_ratio);
  rep.set_metric("max_excess", samples.empty() ? 0.0 : max_excess);
  rep.set_metric("min_eigenvalue", hs.min_eigenvalue());
  rep.set_metric("max_functional_dual_norm", max_dual);
  rep.set_metric("weight_sum", hs.weights().sum());
  rep.set_check("continuity_bound", max_ratio <= 1.0 + tol);
  rep.set_check("positive_definite", hs.definite());
  return rep;
}

}  // namespace mbasis
