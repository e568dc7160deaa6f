#pragma once

#include "mbasis/linalg.hpp"

#include <vector>

/// Dense two-phase simplex for the small linear programs that appear in dual
/// norm and extension computations. Not a general-purpose solver.
namespace mbasis::lp {

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

/// minimize cost . x  subject to  eq x = eq_rhs,  le x <= le_rhs,
/// x_j >= 0 unless free[j].
struct Problem {
  Vec cost;
  Mat eq;
  Vec eq_rhs;
  Mat le;
  Vec le_rhs;
  std::vector<bool> free;
};

struct Solution {
  Status status = Status::Infeasible;
  Vec x;
  double objective = 0.0;
  int pivots = 0;
};

Solution solve(const Problem& problem, double pivot_tol = 1e-11);

}  // namespace mbasis::lp
