#pragma once

#include "mbasis/biortho.hpp"
#include "mbasis/kuelbs.hpp"
#include "mbasis/norms.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mbasis::cli {

enum class Generator { Explicit, Random, Orthonormal, Auerbach, StandardBasis, Example12 };
enum class FunctionalSource { FromBiorthogonal, FromDualityMaps, Explicit };
enum class WeightRule { Geometric, Uniform, Explicit };

/// How the Hilbert structure is assembled from a system.
struct HilbertSpec {
  FunctionalSource functionals = FunctionalSource::FromDualityMaps;
  /// Explicit functionals, one row each.
  Mat u;
  /// Vectors fed to the duality maps; the system's own vectors when empty.
  std::vector<Vector> duality_vectors;
  /// Also feed the coordinate vectors e_1..e_d to the duality maps. For
  /// p-norms this makes the family span the dual, so G is definite. Unset
  /// means: only when the family would otherwise leave G singular.
  std::optional<bool> with_standard_basis;
  WeightRule weights = WeightRule::Geometric;
  Vec t;
};

struct Tolerances {
  double defect = 1e-8;
  double product = 1e-8;
};

struct Scenario {
  std::string name;
  NormSpec space;
  Generator generator = Generator::StandardBasis;
  /// Explicit vectors, one row each.
  Mat x;
  std::optional<std::uint64_t> seed;
  int auerbach_sweeps = 1000;
  HilbertSpec hilbert;
  std::vector<Construction> constructions;
  Tolerances tolerances;
};

struct SweepSpec {
  std::string name;
  NormKind kind = NormKind::PNorm;
  double p = 2.0;
  int n_min = 2;
  int n_max = 2;
  Generator generator = Generator::Random;
  std::optional<std::uint64_t> seed;
  int auerbach_sweeps = 1000;
  HilbertSpec hilbert;
  std::vector<Construction> constructions;
  Tolerances tolerances;
};

std::string_view to_string(Construction c);

/// A scenario file holds one scenario object, or {"version":1,"scenarios":[...]}.
/// Throws ParseError with "line:column" for malformed text and the field path
/// for invalid content.
std::vector<Scenario> parse_scenarios(const std::string& text);
SweepSpec parse_sweep(const std::string& text);

/// Space of dimension n for one sweep row; weighted sweeps use w_k = 1/k.
NormSpec sweep_space(const SweepSpec& spec, int n);

/// Deterministic given (space, generator, seed).
SystemOfVectors generate_system(const NormSpec& space, Generator generator, const Mat& x,
                                std::optional<std::uint64_t> seed, int auerbach_sweeps);

HilbertStructure build_hilbert(const HilbertSpec& spec, const SystemOfVectors& s);

}  // namespace mbasis::cli
