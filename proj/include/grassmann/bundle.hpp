#pragma once

// Tangent, cotangent and precotangent fibers over a chart point, their chart
// transitions, and the two duality pairings (trace form and tensor form).
//
// Shapes in the chart (F, G) with k = dim F, m = dim G:
//   tangent X  : m×k  (F-coords → G-coords)
//   covector μ : k×m  (G-coords → F-coords)
// Pairings are bilinear (transpose, never conjugate transpose).

#include <optional>
#include <span>
#include <vector>

#include "grassmann/atlas.hpp"
#include "grassmann/opcore.hpp"

namespace grassmann {

struct TangentVector {
  ChartPoint at;
  Mat X;

  TangentVector(ChartPoint at, Mat x);
};

enum class ClassTag { unrestricted, trace_class_emulated, compact_emulated };

struct Covector {
  ChartPoint at;
  Mat mu;
  ClassTag tag = ClassTag::unrestricted;
  /// Required for the emulated tags, absent otherwise.
  std::optional<DecayProfile> decay;

  Covector(ChartPoint at, Mat mu, ClassTag tag = ClassTag::unrestricted,
           std::optional<DecayProfile> decay = std::nullopt);
};

/// One rank-one term x ⊗ y with x in F-coords and y in G-coords (G_* is
/// identified with G through the chart's basis).
struct TensorTerm {
  Vec x;
  Vec y;
};

struct TensorCovector {
  ChartPoint at;
  std::vector<TensorTerm> terms;

  TensorCovector(ChartPoint at, std::vector<TensorTerm> terms = {});
};

/// One summand of a fiber map X ↦ Σ_j T_j·X·S_j.
struct FiberFactor {
  Mat S;
  Mat T;
};

Mat apply_factors(std::span<const FiberFactor> factors, const Mat& x);

/// The derivative of transition_base at pt in its two product-rule pieces:
/// X ↦ n_g·X·d_f⁻¹ − ψ(A)·n_f·X·d_f⁻¹. The S matrices are d_f⁻¹ obtained by
/// an LU solve against the identity.
struct TangentTransition {
  ChartPoint image;
  std::vector<FiberFactor> factors;
};

TangentTransition tangent_factors(const ChartPoint& pt, const ChartId& target,
                                  double tol_domain = kDefaultTolDomain);

/// Factors of the inverse-direction tangent map (target chart back to the
/// source chart, at ψ(A)); these are what pushforward_tensor expects.
std::vector<FiberFactor> cotangent_factors(const ChartPoint& pt, const ChartId& target,
                                           double tol_domain = kDefaultTolDomain);

/// (ψ(A), Dψ_A[X]).
TangentVector transition_tangent(const TangentVector& v, const ChartId& target,
                                 double tol_domain = kDefaultTolDomain);

/// (ψ(A), μ') with μ' the bilinear transpose of the reversed tangent map
/// applied to μ, so that Tr(μ'·X') = Tr(μ·X). The class tag is carried over.
Covector transition_cotangent(const Covector& c, const ChartId& target,
                              double tol_domain = kDefaultTolDomain);

/// μ' through the orthogonal-projector formula for hilbert charts:
/// with V the source chart, W the target and A' the image point,
///   μ' = (P_V(P_W + A'))⁻¹ μ P_{V⊥} (1 − (1_W + A')(P_V(P_W + A'))⁻¹ P_V)
/// evaluated as n×n operators and read back in W-coordinates.
Mat hilbert_cotangent_formula(const Covector& c, const ChartId& target,
                              double tol_domain = kDefaultTolDomain);

/// Tr(μ·X), traced over F-coords and over G-coords; throws chart_mismatch if
/// the two points differ.
cplx pair_trace(const Covector& c, const TangentVector& v);

/// Σ_i ⟨X x_i, y_i⟩ with the bilinear coordinate pairing on G-coords.
cplx pair_tensor(const TangentVector& v, const TensorCovector& tc);

/// μ = Σ_i x_i y_iᵀ.
Covector tensor_to_operator(const TensorCovector& tc);

/// SVD-minimal decomposition μ = Σ σ_i u_i conj(v_i)ᵀ with x_i = σ_i u_i.
/// Singular values below n·ε·σ_max are dropped, so μ = 0 gives no terms.
TensorCovector operator_to_tensor(const Covector& c);

/// terms' = { (S_j x_i, T_jᵀ y_i) } at the image point in `target`. The
/// factors must reproduce the reversed tangent map on a probe set
/// (factor_mismatch otherwise).
TensorCovector pushforward_tensor(const TensorCovector& tc,
                                  std::span<const FiberFactor> factors,
                                  const ChartId& target,
                                  double tol_domain = kDefaultTolDomain);

}  // namespace grassmann
