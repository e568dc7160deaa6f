#pragma once

#include "mbasis/biortho.hpp"
#include "mbasis/linalg.hpp"
#include "mbasis/norms.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mbasis {

/// f(v) = value.
struct Constraint {
  Vector v;
  double value = 0.0;
};

/// minimize ||f||_* subject to f(v_k) = c_k. When bound_scale is set the
/// result also reports whether the optimum is dominated by the seminorm
/// p(y) = bound_scale * ||y||, i.e. whether optimum <= bound_scale.
struct ExtensionProblem {
  NormSpec space;
  std::vector<Constraint> constraints;
  std::optional<double> bound_scale;
};

enum class ExtensionSolver { Trivial, Unique, ClosedFormL2, LinearProgram, OneConstraint, Newton };

std::string_view to_string(ExtensionSolver s);

struct TracePoint {
  int iteration = 0;
  double objective = 0.0;
  double gap = 0.0;
};

struct ExtensionResult {
  Functional functional;
  /// Dual norm of the returned functional.
  double optimum = 0.0;
  /// Certified interval around the true minimum: lower is a weak-duality
  /// bound c.mu / ||V mu||, upper is the dual norm of a feasible point.
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  bool converged = true;
  /// x with ||x|| = 1 and f(x) = lower_bound.
  Vector certificate;
  std::optional<bool> bound_satisfied;
  ExtensionSolver solver = ExtensionSolver::Trivial;
  /// Constraints left after dropping dependent ones.
  int independent_constraints = 0;
  int iterations = 0;
  std::vector<TracePoint> trace;
};

struct ExtensionOptions {
  bool trace = false;
  /// 0 selects 200 * dim.
  int max_iterations = 0;
  /// Relative gap at which the iterative solver stops.
  double gap_tol = 1e-12;
};

/// Finite-dimensional Hahn-Banach: a minimal dual-norm functional taking the
/// prescribed values. Dependent constraints are reduced; an inconsistent
/// system (least-squares residual > 1e-8) throws Infeasible.
///
/// Solvers: unique solve when the constraints pin f down, minimum Euclidean
/// norm solution for p = 2, linear programs for p in {1, inf} and polyhedral
/// norms, and a damped Newton iteration on the null space of the constraints
/// for other p.
ExtensionResult min_dual_norm_extension(const ExtensionProblem& problem, const ExtensionOptions& options = {});

/// Norming functional of x through the single constraint f(x) = ||x||^2;
/// the optimum equals ||x||.
ExtensionResult one_dim_norming(const NormSpec& space, const Vector& x, const ExtensionOptions& options = {});

/// Per index, the minimal dual-norm functional with f_i(x_j) = delta_ij.
/// Requires a fundamental minimal system; throws DegenerateSystem otherwise.
BiorthogonalSystem min_biorthogonal_functionals(const SystemOfVectors& s);

/// iteration,objective,gap
std::string trace_csv(const ExtensionResult& result);

}  // namespace mbasis
