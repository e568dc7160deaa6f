#pragma once

#include "mbasis/kuelbs.hpp"
#include "mbasis/linalg.hpp"
#include "mbasis/norms.hpp"
#include "mbasis/report.hpp"

#include <span>
#include <vector>

namespace mbasis {

/// Candidate system {x_i}. Fundamental/minimal status is computed, never assumed.
struct SystemOfVectors {
  NormSpec space;
  std::vector<Vector> vectors;

  int size() const { return static_cast<int>(vectors.size()); }
  Mat matrix() const { return columns_of(vectors); }
};

/// Vectors paired with functionals, with the pairing matrix P(i, j) = F_i(x_j)
/// and the norm products ||x_i|| ||F_i||_*.
struct BiorthogonalSystem {
  SystemOfVectors system;
  std::vector<Functional> functionals;
  Mat pairing;
  Vec products;

  /// max |P - I|.
  double defect() const;
};

/// Computes pairing, products and dual-norm caches.
BiorthogonalSystem make_biorthogonal_system(SystemOfVectors system, std::vector<Functional> functionals);

struct RankReport {
  bool passed = false;
  int rank = 0;
  int dim = 0;
};

/// The closed span of X is the whole space, i.e. rank X = dim.
RankReport check_fundamental(const SystemOfVectors& s, double rel_tol = 1e-10);

struct MinimalityReport {
  std::vector<bool> passed;
  /// Euclidean distance from x_i to span{x_j : j != i}.
  std::vector<double> distance;
  bool all() const;
};

MinimalityReport check_minimal(const SystemOfVectors& s, double tol = 1e-10);

/// No nonzero x is annihilated by every F_i, i.e. rank F = dim.
RankReport check_total(const NormSpec& space, std::span<const Functional> fs, double rel_tol = 1e-10);

/// x_i* = (||x_i||_B^2 / ||x_i||_H^2) (., x_i)_H, coordinates scaled G x_i.
/// Throws DegenerateSystem when ||x_i||_H <= tol times its rounding scale
/// sqrt(sum t_n (|u_n*| . |x_i|)^2), i.e. x_i is numerically in the kernel.
Functional literal_functional(const HilbertStructure& hs, const SystemOfVectors& s, int i,
                                  double tol = 1e-12);

/// f_i = (||x_i||_B^2 / (x_i, z_i)_H) (., z_i)_H where z_i is x_i minus its
/// G-orthogonal projection onto span{x_j : j != i}. Satisfies
/// f_i(x_j) = ||x_i||_B^2 delta_ij. Throws DegenerateSystem when x_i is in the
/// kernel of G (as for the literal variant) or when
/// (x_i, z_i)_H <= tol ||x_i||_H^2, the squared sine of the H-angle between
/// x_i and the other vectors.
Functional complement_functional(const HilbertStructure& hs, const SystemOfVectors& s, int i,
                                     double tol = 1e-12);

enum class Construction { Literal, Complement, MinNorm };

/// Builds the literal or complement functionals for every index, rescaled
/// so that F_i(x_i) = 1 (the result does not depend on the scale of x_i).
BiorthogonalSystem construct_system(const HilbertStructure& hs, const SystemOfVectors& s,
                                    Construction construction);

/// Per-index literal-vs-complement comparison on the normalized system.
struct CoincidenceReport {
  std::vector<bool> coincide;
  std::vector<bool> h_orthogonal;
  /// max_k |literal_k - complement_k|
  std::vector<double> coordinate_gap;
  /// max_{j != i} |(x_i, x_j)_H|
  std::vector<double> max_cross_inner;

  bool flags_agree() const { return coincide == h_orthogonal; }
};

CoincidenceReport compare_literal_complement(const HilbertStructure& hs, const SystemOfVectors& s,
                                             double tol = 1e-8);

/// Biorthogonality defect, norm products and the four system checks.
/// Products are measured, never required to equal one.
///
/// Metrics: defect, max_product, min_product, fundamental_rank, total_rank.
/// Checks: fundamental, minimal, total, biorthogonal, m_basis,
/// duality_inequality, products_one.
AuditReport audit_products(const BiorthogonalSystem& b, double tol = 1e-8);

}  // namespace mbasis
