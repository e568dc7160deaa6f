#include "mbasis/extension.hpp"

#include "mbasis/error.hpp"
#include "mbasis/lp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mbasis {
namespace {

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

struct Reduced {
  Mat v;  // d x r, independent columns
  Vec c;
};

Reduced reduce_constraints(const ExtensionProblem& problem) {
  const int d = problem.space.dim();
  const auto k = static_cast<Eigen::Index>(problem.constraints.size());
  Mat v(d, k);
  Vec c(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const auto& con = problem.constraints[j];
    if (con.v.dim() != d) throw DimensionMismatch("extension constraint", d, con.v.dim());
    if (!std::isfinite(con.value)) throw InvalidArgument("extension constraint value is not finite");
    v.col(j) = con.v.coords;
    c(j) = con.value;
  }
  if (k == 0) return {v, c};

  const Vec f0 = v.transpose().completeOrthogonalDecomposition().solve(c);
  const double resid = (v.transpose() * f0 - c).cwiseAbs().maxCoeff();
  if (resid > 1e-8 * std::max(1.0, c.cwiseAbs().maxCoeff()))
    throw Infeasible("extension constraints are inconsistent (least-squares residual " + format_double(resid) + ")");

  Eigen::ColPivHouseholderQR<Mat> qr(v);
  qr.setThreshold(1e-10);
  const auto r = qr.rank();
  Reduced out{Mat(d, r), Vec(r)};
  for (Eigen::Index j = 0; j < r; ++j) {
    const auto col = qr.colsPermutation().indices()(j);
    out.v.col(j) = v.col(col);
    out.c(j) = c(col);
  }
  return out;
}

// Weak-duality bound from a multiplier mu: c.mu / ||V mu|| <= min ||f||_*.
void set_lower_bound(const NormSpec& space, const Reduced& red, const Vec& mu, ExtensionResult& res) {
  const Vector x(red.v * mu);
  const double nx = norm(space, x);
  if (nx > 0.0 && red.c.dot(mu) > 0.0) {
    res.lower_bound = red.c.dot(mu) / nx;
    res.certificate = Vector(x.coords / nx);
  } else {
    res.lower_bound = 0.0;
  }
}

// Multiplier from the dual-norm maximizer of f, projected onto range(V).
Vec multiplier_from_maximizer(const NormSpec& space, const Reduced& red, const Functional& f) {
  const DualNormResult dn = dual_norm_certified(space, f);
  return red.v.colPivHouseholderQr().solve(dn.maximizer.coords);
}

Functional solve_lp_primal(const NormSpec& space, const Reduced& red) {
  const int d = space.dim();
  const auto r = red.v.cols();
  lp::Problem prob;
  if (space.kind() == NormKind::Polyhedral) {
    // f = A^T lambda, minimize ||lambda||_1.
    const Mat& a = space.rows();
    const auto m = a.rows();
    const Mat va = red.v.transpose() * a.transpose();
    prob.cost = Vec::Ones(2 * m);
    prob.eq.resize(r, 2 * m);
    prob.eq << va, -va;
    prob.eq_rhs = red.c;
    const lp::Solution sol = lp::solve(prob);
    if (sol.status != lp::Status::Optimal) throw Infeasible("extension LP has no optimum");
    return Functional(a.transpose() * (sol.x.head(m) - sol.x.tail(m)));
  }
  const Vec& s = space.scale();
  if (std::isinf(space.p())) {
    // dual norm sum |f_k| / s_k
    prob.cost.resize(2 * d);
    prob.cost << s.cwiseInverse(), s.cwiseInverse();
    prob.eq.resize(r, 2 * d);
    prob.eq << red.v.transpose(), -red.v.transpose();
    prob.eq_rhs = red.c;
    const lp::Solution sol = lp::solve(prob);
    if (sol.status != lp::Status::Optimal) throw Infeasible("extension LP has no optimum");
    return Functional(sol.x.head(d) - sol.x.tail(d));
  }
  // p = 1: dual norm max |f_k| / s_k; variables (f, tau).
  prob.cost = Vec::Zero(d + 1);
  prob.cost(d) = 1.0;
  prob.free.assign(d + 1, true);
  prob.free[d] = false;
  prob.le = Mat::Zero(2 * d, d + 1);
  for (int k = 0; k < d; ++k) {
    prob.le(k, k) = 1.0 / s(k);
    prob.le(k, d) = -1.0;
    prob.le(d + k, k) = -1.0 / s(k);
    prob.le(d + k, d) = -1.0;
  }
  prob.le_rhs = Vec::Zero(2 * d);
  prob.eq = Mat::Zero(r, d + 1);
  prob.eq.leftCols(d) = red.v.transpose();
  prob.eq_rhs = red.c;
  const lp::Solution sol = lp::solve(prob);
  if (sol.status != lp::Status::Optimal) throw Infeasible("extension LP has no optimum");
  return Functional(sol.x.head(d));
}

// maximize c.mu subject to ||V mu|| <= 1.
Vec solve_lp_dual(const NormSpec& space, const Reduced& red) {
  const int d = space.dim();
  const auto r = red.v.cols();
  lp::Problem prob;
  if (space.kind() == NormKind::Polyhedral || std::isinf(space.p())) {
    const Mat rows = space.kind() == NormKind::Polyhedral ? Mat(space.rows() * red.v)
                                                          : Mat(space.scale().asDiagonal() * red.v);
    prob.cost = -red.c;
    prob.le.resize(2 * rows.rows(), r);
    prob.le << rows, -rows;
    prob.le_rhs = Vec::Ones(2 * rows.rows());
    prob.free.assign(r, true);
  } else {
    // sum_k s_k |(V mu)_k| <= 1 via e_k >= |s_k (V mu)_k|; variables (mu, e).
    const Mat sv = space.scale().asDiagonal() * red.v;
    prob.cost = Vec::Zero(r + d);
    prob.cost.head(r) = -red.c;
    prob.free.assign(r + d, false);
    for (Eigen::Index j = 0; j < r; ++j) prob.free[j] = true;
    prob.le = Mat::Zero(2 * d + 1, r + d);
    prob.le.topLeftCorner(d, r) = sv;
    prob.le.block(0, r, d, d) = -Mat::Identity(d, d);
    prob.le.block(d, 0, d, r) = -sv;
    prob.le.block(d, r, d, d) = -Mat::Identity(d, d);
    prob.le.block(2 * d, r, 1, d).setOnes();
    prob.le_rhs = Vec::Zero(2 * d + 1);
    prob.le_rhs(2 * d) = 1.0;
  }
  const lp::Solution sol = lp::solve(prob);
  if (sol.status != lp::Status::Optimal) throw Infeasible("extension dual LP has no optimum");
  return sol.x.head(r);
}

double q_objective(const Vec& g, double q) { return g.cwiseAbs().array().pow(q).sum() / q; }

// minimize ||g||_q over g0 + N z, with f = s .* g.
void solve_newton(const NormSpec& space, const Reduced& red, const ExtensionOptions& opt, ExtensionResult& res) {
  const int d = space.dim();
  const double q = conjugate_exponent(space.p());
  const Vec& s = space.scale();
  const Mat w = s.asDiagonal() * red.v;
  const Vec g0 = w * (w.transpose() * w).ldlt().solve(red.c);
  const Mat n = null_space(w.transpose());
  const int max_iter = opt.max_iterations > 0 ? opt.max_iterations : 200 * d;

  Vec z = Vec::Zero(n.cols());
  Vec g = g0;
  auto evaluate = [&](const Vec& gg) {
    Functional f(s.cwiseProduct(gg));
    res.upper_bound = dual_norm(space, f);
    set_lower_bound(space, red, multiplier_from_maximizer(space, red, f), res);
    res.functional = std::move(f);
  };
  evaluate(g);

  int it = 0;
  for (; it < max_iter; ++it) {
    const double gap = res.upper_bound - res.lower_bound;
    if (opt.trace) res.trace.push_back({it, res.upper_bound, gap});
    if (gap <= opt.gap_tol * std::max(1.0, res.upper_bound)) break;

    const double gmax = g.cwiseAbs().maxCoeff();
    Vec psi(d), curv(d);
    for (int k = 0; k < d; ++k) {
      const double a = std::abs(g(k));
      psi(k) = sign(g(k)) * std::pow(a, q - 1.0);
      curv(k) = (q - 1.0) * std::pow(std::max(a, 1e-12 * gmax), q - 2.0);
    }
    const Vec grad = n.transpose() * psi;
    Mat hess = n.transpose() * curv.asDiagonal() * n;
    hess.diagonal().array() += 1e-14 * std::max(1.0, hess.diagonal().maxCoeff());
    Vec dz = -hess.ldlt().solve(grad);
    if (!dz.allFinite() || grad.dot(dz) >= 0.0) dz = -grad;

    const double phi = q_objective(g, q);
    double step = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls, step *= 0.5) {
      const Vec zt = z + step * dz;
      const Vec gt = g0 + n * zt;
      if (q_objective(gt, q) <= phi + 1e-4 * step * grad.dot(dz)) {
        z = zt;
        g = gt;
        moved = true;
        break;
      }
    }
    if (!moved) break;
    evaluate(g);
  }
  res.iterations = it;
  res.converged = res.upper_bound - res.lower_bound <= std::max(1e-9, opt.gap_tol) * std::max(1.0, res.upper_bound);
}

}  // namespace

std::string_view to_string(ExtensionSolver s) {
  switch (s) {
    case ExtensionSolver::Trivial: return "trivial";
    case ExtensionSolver::Unique: return "unique";
    case ExtensionSolver::ClosedFormL2: return "closed_form_l2";
    case ExtensionSolver::LinearProgram: return "linear_program";
    case ExtensionSolver::OneConstraint: return "one_constraint";
    case ExtensionSolver::Newton: return "newton";
  }
  return "unknown";
}

ExtensionResult min_dual_norm_extension(const ExtensionProblem& problem, const ExtensionOptions& options) {
  const NormSpec& space = problem.space;
  const int d = space.dim();
  const Reduced red = reduce_constraints(problem);
  const auto r = red.v.cols();

  ExtensionResult res;
  res.independent_constraints = static_cast<int>(r);
  res.certificate = Vector(Vec::Zero(d));

  if (r == 0 || red.c.isZero(0.0)) {
    res.solver = ExtensionSolver::Trivial;
    res.functional = Functional(Vec::Zero(d));
  } else if (r == d) {
    res.solver = ExtensionSolver::Unique;
    res.functional = Functional(red.v.transpose().fullPivLu().solve(red.c));
    res.upper_bound = dual_norm(space, res.functional);
    set_lower_bound(space, red, multiplier_from_maximizer(space, red, res.functional), res);
  } else if (space.is_p_family() && space.p() == 2.0) {
    res.solver = ExtensionSolver::ClosedFormL2;
    const Vec& s = space.scale();
    const Mat w = s.asDiagonal() * red.v;
    const Vec mu = (w.transpose() * w).ldlt().solve(red.c);
    res.functional = Functional(s.cwiseProduct(w * mu));
    res.upper_bound = dual_norm(space, res.functional);
    set_lower_bound(space, red, mu, res);
  } else if (space.is_piecewise_linear()) {
    res.solver = ExtensionSolver::LinearProgram;
    res.functional = solve_lp_primal(space, red);
    res.upper_bound = dual_norm(space, res.functional);
    set_lower_bound(space, red, solve_lp_dual(space, red), res);
  } else if (r == 1) {
    // |c| = |f(v)| <= ||f||_* ||v|| with equality for f = c J(v) / ||v||^2.
    res.solver = ExtensionSolver::OneConstraint;
    const Vector v(red.v.col(0));
    const double nv = norm(space, v);
    res.functional = Functional(red.c(0) / (nv * nv) * duality_map(space, v).coords);
    res.upper_bound = dual_norm(space, res.functional);
    set_lower_bound(space, red, Vec::Constant(1, sign(red.c(0))), res);
  } else {
    res.solver = ExtensionSolver::Newton;
    solve_newton(space, red, options, res);
  }

  res.optimum = res.upper_bound;
  if (res.solver != ExtensionSolver::Newton) {
    res.converged = true;
    if (options.trace) res.trace.push_back({0, res.upper_bound, res.upper_bound - res.lower_bound});
  }
  if (res.functional.coords.size() == d) res.functional.dual_norm_cache = res.optimum;
  if (problem.bound_scale)
    res.bound_satisfied = res.optimum <= *problem.bound_scale * (1.0 + space.default_tolerance());
  return res;
}

ExtensionResult one_dim_norming(const NormSpec& space, const Vector& x, const ExtensionOptions& options) {
  const double nx = norm(space, x);
  if (nx == 0.0) throw InvalidArgument("one_dim_norming: zero vector");
  ExtensionProblem prob{space, {{x, nx * nx}}, nx};
  return min_dual_norm_extension(prob, options);
}

BiorthogonalSystem min_biorthogonal_functionals(const SystemOfVectors& s) {
  if (!check_fundamental(s).passed) throw DegenerateSystem("min_biorthogonal_functionals: system is not fundamental");
  if (!check_minimal(s).all()) throw DegenerateSystem("min_biorthogonal_functionals: system is not minimal");
  std::vector<Functional> fs;
  for (int i = 0; i < s.size(); ++i) {
    ExtensionProblem prob{s.space, {}, std::nullopt};
    for (int j = 0; j < s.size(); ++j) prob.constraints.push_back({s.vectors[j], i == j ? 1.0 : 0.0});
    ExtensionResult res = min_dual_norm_extension(prob);
    if (!res.converged)
      throw DegenerateSystem("min_biorthogonal_functionals: index " + std::to_string(i) +
                             " did not converge; bracket [" + format_double(res.lower_bound) + ", " +
                             format_double(res.upper_bound) + "]");
    fs.push_back(std::move(res.functional));
  }
  return make_biorthogonal_system(s, std::move(fs));
}

std::string trace_csv(const ExtensionResult& result) {
  std::string out = "iteration,objective,gap\n";
  for (const auto& t : result.trace)
    out += std::to_string(t.iteration) + ',' + format_double(t.objective) + ',' + format_double(t.gap) + '\n';
  return out;
}

}  // namespace mbasis
