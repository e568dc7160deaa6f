#include "mbasis/biortho.hpp"

#include "mbasis/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mbasis {
namespace {

void check_index(const SystemOfVectors& s, int i) {
  if (i < 0 || i >= s.size())
    throw InvalidArgument("index " + std::to_string(i) + " out of range for a system of size " +
                          std::to_string(s.size()));
}

void check_space(const HilbertStructure& hs, const SystemOfVectors& s) {
  if (hs.space().dim() != s.space.dim())
    throw DimensionMismatch("Hilbert structure vs system", hs.space().dim(), s.space.dim());
  for (const auto& x : s.vectors)
    if (x.dim() != s.space.dim()) throw DimensionMismatch("system vector", s.space.dim(), x.dim());
}

// With G = R^T R (R the weighted functional rows), the Hilbert geometry on
// x is the Euclidean geometry on y = R x. Returns r = R z_i, where z_i is x_i
// minus its G-projection onto span{x_j : j != i}; the projection uses a
// Householder QR of the other y_j, so r is orthogonal to them to working
// precision without squaring condition numbers.
Mat weighted_rows(const HilbertStructure& hs) {
  return hs.weights().cwiseSqrt().asDiagonal() * rows_of(hs.functionals());
}

// ||x||_H evaluated with |u_n*| and |x|: the size of the terms whose
// cancellation produces ||x||_H, hence its rounding scale.
double h_norm_scale(const HilbertStructure& hs, const Vector& x) {
  return (weighted_rows(hs).cwiseAbs() * x.coords.cwiseAbs()).norm();
}

Vec complement_image(const HilbertStructure& hs, const Mat& x, int i) {
  const Mat y = weighted_rows(hs) * x;
  const Eigen::Index n = x.cols();
  Mat others(y.rows(), n - 1);
  for (Eigen::Index j = 0, c = 0; j < n; ++j)
    if (j != i) others.col(c++) = y.col(j);
  if (others.cols() == 0) return y.col(i);

  Eigen::ColPivHouseholderQR<Mat> qr(others);
  qr.setThreshold(1e-12);
  Vec coeffs = qr.householderQ().transpose() * y.col(i);
  coeffs.head(qr.rank()).setZero();
  return qr.householderQ() * coeffs;
}

}  // namespace

double BiorthogonalSystem::defect() const {
  if (pairing.size() == 0) return 0.0;
  return (pairing - Mat::Identity(pairing.rows(), pairing.cols())).cwiseAbs().maxCoeff();
}

BiorthogonalSystem make_biorthogonal_system(SystemOfVectors system, std::vector<Functional> functionals) {
  const int n = system.size();
  if (static_cast<int>(functionals.size()) != n)
    throw InvalidArgument("biorthogonal system needs one functional per vector (" + std::to_string(n) +
                          " vectors, " + std::to_string(functionals.size()) + " functionals)");
  BiorthogonalSystem b;
  b.pairing.resize(n, n);
  b.products.resize(n);
  for (int i = 0; i < n; ++i) {
    if (functionals[i].dim() != system.space.dim())
      throw DimensionMismatch("biorthogonal functional", system.space.dim(), functionals[i].dim());
    functionals[i] = with_dual_norm(system.space, std::move(functionals[i]));
    for (int j = 0; j < n; ++j) b.pairing(i, j) = functionals[i](system.vectors[j]);
    b.products(i) = norm(system.space, system.vectors[i]) * *functionals[i].dual_norm_cache;
  }
  b.system = std::move(system);
  b.functionals = std::move(functionals);
  return b;
}

RankReport check_fundamental(const SystemOfVectors& s, double rel_tol) {
  RankReport r;
  r.dim = s.space.dim();
  r.rank = s.vectors.empty() ? 0 : numerical_rank(s.matrix(), rel_tol);
  r.passed = r.rank == r.dim;
  return r;
}

bool MinimalityReport::all() const {
  return std::all_of(passed.begin(), passed.end(), [](bool b) { return b; });
}

MinimalityReport check_minimal(const SystemOfVectors& s, double tol) {
  MinimalityReport r;
  const int n = s.size();
  if (n == 0) return r;
  const Mat x = s.matrix();
  for (int i = 0; i < n; ++i) {
    Mat others(x.rows(), n - 1);
    for (int j = 0, c = 0; j < n; ++j)
      if (j != i) others.col(c++) = x.col(j);
    double dist = x.col(i).norm();
    if (others.cols() > 0) {
      const Vec coeff = others.completeOrthogonalDecomposition().solve(x.col(i));
      dist = (x.col(i) - others * coeff).norm();
    }
    r.distance.push_back(dist);
    r.passed.push_back(dist > tol);
  }
  return r;
}

RankReport check_total(const NormSpec& space, std::span<const Functional> fs, double rel_tol) {
  RankReport r;
  r.dim = space.dim();
  r.rank = fs.empty() ? 0 : numerical_rank(rows_of(fs), rel_tol);
  r.passed = r.rank == r.dim;
  return r;
}

Functional literal_functional(const HilbertStructure& hs, const SystemOfVectors& s, int i, double tol) {
  check_space(hs, s);
  check_index(s, i);
  const Vector& xi = s.vectors[i];
  const double hn = h_norm(hs, xi);
  if (hn <= tol * h_norm_scale(hs, xi))
    throw DegenerateSystem("literal functional: x_" + std::to_string(i) +
                           " lies in the kernel of the Gram matrix (||x||_H = " + format_double(hn) + ")");
  const double nb = norm(s.space, xi);
  return Functional((nb * nb / (hn * hn)) * (hs.gram() * xi.coords));
}

Functional complement_functional(const HilbertStructure& hs, const SystemOfVectors& s, int i,
                                     double tol) {
  check_space(hs, s);
  check_index(s, i);
  const Vector& xi = s.vectors[i];
  const double hn = h_norm(hs, xi);
  if (hn <= tol * h_norm_scale(hs, xi))
    throw DegenerateSystem("complement functional: x_" + std::to_string(i) +
                           " lies in the kernel of the Gram matrix (||x||_H = " + format_double(hn) + ")");
  const Vec r = complement_image(hs, s.matrix(), i);
  const double xz = r.squaredNorm();  // (x_i, z_i)_H
  if (!(xz > tol * hn * hn))
    throw DegenerateSystem("complement functional: x_" + std::to_string(i) +
                           " is not minimal in the Hilbert geometry ((x_i, z_i)_H / ||x_i||_H^2 = " +
                           format_double(xz / (hn * hn)) + ")");
  const double nb = norm(s.space, xi);
  return Functional((nb * nb / xz) * (weighted_rows(hs).transpose() * r));
}

BiorthogonalSystem construct_system(const HilbertStructure& hs, const SystemOfVectors& s,
                                    Construction construction) {
  if (construction == Construction::MinNorm)
    throw InvalidArgument("construct_system: use min_biorthogonal_functionals for the min-norm construction");
  std::vector<Functional> fs;
  fs.reserve(s.vectors.size());
  for (int i = 0; i < s.size(); ++i) {
    Functional raw = construction == Construction::Literal ? literal_functional(hs, s, i)
                                                           : complement_functional(hs, s, i);
    const double nb = norm(s.space, s.vectors[i]);
    fs.emplace_back(raw.coords / (nb * nb));
  }
  return make_biorthogonal_system(s, std::move(fs));
}

CoincidenceReport compare_literal_complement(const HilbertStructure& hs, const SystemOfVectors& s, double tol) {
  SystemOfVectors unit{s.space, {}};
  for (const auto& x : s.vectors) {
    const double nb = norm(s.space, x);
    if (nb == 0.0) throw DegenerateSystem("compare_literal_complement: zero vector in system");
    unit.vectors.emplace_back(x.coords / nb);
  }
  CoincidenceReport r;
  for (int i = 0; i < unit.size(); ++i) {
    const Functional lit = literal_functional(hs, unit, i);
    const Functional comp = complement_functional(hs, unit, i);
    const double gap = (lit.coords - comp.coords).cwiseAbs().maxCoeff();
    double cross = 0.0;
    for (int j = 0; j < unit.size(); ++j)
      if (j != i) cross = std::max(cross, std::abs(h_inner(hs, unit.vectors[i], unit.vectors[j])));
    r.coordinate_gap.push_back(gap);
    r.max_cross_inner.push_back(cross);
    r.coincide.push_back(gap <= tol);
    r.h_orthogonal.push_back(cross <= tol);
  }
  return r;
}

AuditReport audit_products(const BiorthogonalSystem& b, double tol) {
  AuditReport rep("products");
  const int n = b.system.size();
  const NormSpec& space = b.system.space;
  for (int i = 0; i < n; ++i) {
    AuditRow row;
    row.index = i + 1;
    row.norm_x = norm(space, b.system.vectors[i]);
    row.dual_norm_f = b.functionals[i].dual_norm_cache.value_or(dual_norm(space, b.functionals[i]));
    row.product = b.products(i);
    double d = 0.0;
    for (int j = 0; j < n; ++j) d = std::max(d, std::abs(b.pairing(i, j) - (i == j ? 1.0 : 0.0)));
    row.defect_row_max = d;
    rep.rows.push_back(row);
  }
  rep.pairing = b.pairing;

  const double defect = b.defect();
  const double maxp = n > 0 ? b.products.maxCoeff() : 0.0;
  const double minp = n > 0 ? b.products.minCoeff() : 0.0;
  const RankReport fund = check_fundamental(b.system);
  const MinimalityReport minimal = check_minimal(b.system);
  const RankReport total = check_total(space, b.functionals);
  const bool biortho = defect <= tol;

  rep.set_metric("defect", defect);
  rep.set_metric("max_product", maxp);
  rep.set_metric("min_product", minp);
  rep.set_metric("fundamental_rank", fund.rank);
  rep.set_metric("total_rank", total.rank);
  rep.set_check("fundamental", fund.passed);
  rep.set_check("minimal", minimal.all());
  rep.set_check("total", total.passed);
  rep.set_check("biorthogonal", biortho);
  rep.set_check("m_basis", fund.passed && minimal.all() && total.passed && biortho);
  // F_i(x_i) >= 1 - defect and F_i(x_i) <= ||F_i|| ||x_i||.
  rep.set_check("duality_inequality", n == 0 || minp >= 1.0 - defect - 1e-12);
  rep.set_check("products_one", n == 0 || (b.products.array() - 1.0).abs().maxCoeff() <= tol);
  if (n > 0 && (b.products.array() - 1.0).abs().maxCoeff() > tol)
    rep.add_finding("norm products deviate from 1: max " + format_double(maxp) + ", min " + format_double(minp));
  return rep;
}

}  // namespace mbasis
