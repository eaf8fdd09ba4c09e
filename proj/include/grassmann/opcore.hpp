#pragma once

// Dense complex operators between finite coordinate spaces: factorizations,
// Schatten norms, oblique projections, and seeded test-operator generators.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "grassmann/random.hpp"
#include "grassmann/types.hpp"

namespace grassmann {

/// A matrix with optional bookkeeping labels for its domain and codomain.
/// Labels are only enforced by compose(); the numerical kernels work on Mat.
struct Operator {
  Mat m;
  std::optional<std::string> domain;
  std::optional<std::string> codomain;
};

/// outer ∘ inner. Throws label_mismatch when both labels are set and differ,
/// dimension_mismatch when the shapes do not chain.
Operator compose(const Operator& outer, const Operator& inner);

/// Nonincreasing singular values, from an SVD (never from eig(TᴴT)).
RVec singular_values(const Mat& t);

struct SchattenReport {
  double p = 1.0;
  double value = 0.0;
  RVec singular_values;
};

/// (Σ σ_k^p)^{1/p}; p must be finite and ≥ 1.
double schatten_value(const RVec& sigma, double p);
SchattenReport schatten_norm(const Mat& t, double p);
double operator_norm(const Mat& t);

/// True when the spectral norm of `m` is ≤ tol. Uses the Frobenius bound
/// first and only pays for an SVD when it is inconclusive.
bool spectral_norm_at_most(const Mat& m, double tol);

struct ObliqueProjections {
  Mat onto_f;  // projection onto F along G
  Mat onto_g;  // projection onto G along F
  double conditioning = 0.0;  // σ_min([B_F | B_G]) / σ_max([B_F | B_G])
};

constexpr double kDefaultTolSplit = 1e-8;

/// Projections for the decomposition ℂⁿ = F ⊕ G, given bases of F and G as
/// columns. Throws split_failure when [B_F | B_G] is not square or its
/// relative smallest singular value is ≤ tol_split.
ObliqueProjections oblique_projections(const Mat& basis_f, const Mat& basis_g,
                                       double tol_split = kDefaultTolSplit);

/// Orthonormal basis of the column span (thin Householder Q). Throws
/// invalid_argument if the columns are numerically dependent.
Mat orthonormalize(const Mat& columns);

/// Orthonormal basis of the orthogonal complement of the column span of an
/// orthonormal `basis`.
Mat orthogonal_complement(const Mat& basis);

/// lhs · divisor⁻¹ via an LU solve on the transposed system.
Mat right_solve(const Mat& lhs, const Mat& divisor);

/// Singular-value profile for generated operators.
struct DecayProfile {
  enum class Kind { zero, geometric, power };

  Kind kind = Kind::zero;
  double param = 0.0;

  static DecayProfile zero() { return {Kind::zero, 0.0}; }
  static DecayProfile geometric(double r) { return {Kind::geometric, r}; }
  static DecayProfile power(double alpha) { return {Kind::power, alpha}; }

  /// k-th singular value, k = 0, 1, ...: r^k, (k+1)^-α, or 0.
  double value(Index k) const;

  /// Throws bad_profile unless 0 < r < 1 (geometric) or α > 1 (power).
  /// The zero profile is only accepted when allow_zero is set.
  void validate(bool allow_zero) const;

  bool operator==(const DecayProfile&) const = default;
};

/// U · diag(σ) · Vᴴ with σ_k = profile.value(k) and seeded Haar-like U, V.
Mat gen_decay_operator(Index rows, Index cols, const DecayProfile& profile,
                       std::uint64_t seed);

struct SingularTail {
  std::vector<Index> dims;
  std::vector<double> tail_norms;
};

/// For each operator of a truncation ladder, Σ_{k ≥ cutoff} σ_k (0-based k).
/// Every rung must equal the top-left block of the next one, bit for bit;
/// otherwise throws ladder_mismatch.
SingularTail compactness_tail(std::span<const Mat> ladder, Index cutoff);

/// True when `small` is exactly the top-left block of `large`.
bool embeds_exactly(const Mat& small, const Mat& large);

}  // namespace grassmann
