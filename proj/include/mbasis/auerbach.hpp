#pragma once

#include "mbasis/biortho.hpp"
#include "mbasis/norms.hpp"

#include <cstdint>
#include <vector>

namespace mbasis {

struct AuerbachResult {
  SystemOfVectors system;
  BiorthogonalSystem biorthogonal;
  /// |det X| after initialization and after every accepted exchange.
  std::vector<double> det_trace;
  /// max_i ||x_i|| ||x_i*||_* - 1
  double epsilon_search = 0.0;
  int sweeps = 0;
  /// False when the sweep cap was hit with exchanges still improving |det|.
  bool converged = false;
};

/// Determinant-maximizing exchange ascent over unit vectors.
///
/// Starts from dim seeded random unit vectors. For column j, det X is linear
/// in x_j with coefficient |det X| * F_j (F_j the j-th row of X^-1), so the
/// best replacement is a norming point of F_j; it is accepted while
/// ||F_j||_* > 1 + 1e-13. At a fixed point every ||F_j||_* = 1.
AuerbachResult auerbach_search(const NormSpec& space, int max_sweeps, std::uint64_t seed);

}  // namespace mbasis
