#pragma once

// Points of the Grassmannian, charts indexed by complementary pairs (F, G),
// chart domains, graphs, and base transition maps.
//
// Coordinates: a subspace H in the domain of the chart (F, G) is the graph
// { f + A f : f ∈ F } of a unique A ∈ L(F, G). With orthonormal bases B_F
// (n×k) and B_G (n×(n-k)), A is stored as the (n-k)×k matrix taking
// F-coefficients to G-coefficients, so the graph is spanned by B_F + B_G·A.

#include <memory>

#include "grassmann/opcore.hpp"
#include "grassmann/types.hpp"

namespace grassmann {

constexpr double kDefaultTolDomain = 1e-8;
constexpr double kDefaultTolEq = 1e-10;

class Subspace {
 public:
  /// Orthonormalizes the given spanning columns.
  static Subspace from_spanning(const Mat& columns);
  /// Takes an already orthonormal basis; throws invalid_argument when
  /// ‖BᴴB − I‖ > 1e-12.
  static Subspace from_orthonormal(const Mat& basis);

  Index ambient_dim() const { return basis_.rows(); }
  Index dim() const { return basis_.cols(); }
  const Mat& basis() const { return basis_; }
  /// B·Bᴴ, computed once.
  const Mat& projector() const { return projector_; }

 private:
  explicit Subspace(Mat basis);

  Mat basis_;
  Mat projector_;
};

/// ‖P_1 − P_2‖ in operator norm.
double projector_distance(const Subspace& a, const Subspace& b);
bool same_subspace(const Subspace& a, const Subspace& b, double tol_eq = kDefaultTolEq);

enum class ChartFlavor { general, hilbert };

/// The chart index (F, G). Immutable; copies share the cached factorization
/// of [B_F | B_G].
class ChartId {
 public:
  /// Throws split_failure unless F ⊕ G = ℂⁿ with relative conditioning above
  /// tol_split. The hilbert flavor additionally requires G = F^⊥ within tol_eq
  /// (invalid_argument otherwise).
  ChartId(Subspace f, Subspace g, ChartFlavor flavor = ChartFlavor::general,
          double tol_split = kDefaultTolSplit, double tol_eq = kDefaultTolEq);

  /// The orthogonal chart (V, V^⊥).
  static ChartId hilbert(Subspace v);

  const Subspace& f() const;
  const Subspace& g() const;
  ChartFlavor flavor() const;
  double split_conditioning() const;
  Index ambient_dim() const { return f().ambient_dim(); }

  /// Coefficients of the columns of v in the basis [B_F | B_G]:
  /// top k rows are F-coordinates, the rest G-coordinates.
  Mat coefficients(const Mat& v) const;

 private:
  struct State;
  std::shared_ptr<const State> state_;
};

bool same_chart(const ChartId& a, const ChartId& b, double tol_eq = kDefaultTolEq);

/// A ∈ L(F, G) in the coordinates described above.
struct ChartPoint {
  ChartId chart;
  Mat A;

  /// Throws dimension_mismatch unless A is (n-k)×k for the chart.
  ChartPoint(ChartId chart, Mat a);
};

/// Same chart (subspace equality) and A equal to 1e-12 relative.
bool same_point(const ChartPoint& a, const ChartPoint& b);

/// Overload of the opcore routine for subspaces: returns (π_G(F), π_F(G)).
ObliqueProjections oblique_projections(const Subspace& f, const Subspace& g,
                                       double tol_split = kDefaultTolSplit);

struct DomainReport {
  bool inside = false;
  /// Smallest singular value of the projection onto F along G, restricted
  /// to H, in orthonormal bases of H and F.
  double conditioning = 0.0;
};

/// Throws dimension_mismatch unless dim H = dim F in the same ambient space.
DomainReport in_chart_domain(const Subspace& h, const ChartId& chart,
                             double tol_domain = kDefaultTolDomain);

/// A = π_F(G)|_H ∘ (π_G(F)|_H)⁻¹ in coordinates. Throws
/// chart_domain_violation when the conditioning is ≤ tol_domain.
ChartPoint chart_forward(const Subspace& h, const ChartId& chart,
                         double tol_domain = kDefaultTolDomain);

/// Orthogonal-projector form P_V^⊥ P_W P_V (P_V P_W P_V)⁻¹ for a hilbert
/// chart, evaluated with the n×n projector of W. Independent of
/// chart_forward's block solve; used to cross-check it.
Mat hilbert_chart_coordinates(const Subspace& w, const ChartId& chart,
                              double tol_domain = kDefaultTolDomain);

/// The graph of A, orthonormalized.
Subspace chart_inverse(const ChartPoint& pt);

/// Everything the base transition computes that its derivative reuses.
/// With Γ = B_F + B_G·A and [B_F' | B_G']⁻¹ applied to Γ split into
/// (d_f, d_g), the image is d_g·d_f⁻¹; n_f, n_g are the split coefficients
/// of B_G, i.e. the derivative of (d_f, d_g) along A.
struct TransitionJet {
  Mat image;
  Mat d_f;
  Mat n_f;
  Mat n_g;
};

/// ψ(A) = π_{F'}(G')(1 + A)·(π_{G'}(F')(1 + A))⁻¹ evaluated on the
/// (non-orthonormalized) graph basis. Throws chart_domain_violation when
/// the graph of A is not in the target domain with conditioning > tol_domain.
TransitionJet transition_jet(const ChartPoint& pt, const ChartId& target,
                             double tol_domain = kDefaultTolDomain);

ChartPoint transition_base(const ChartPoint& pt, const ChartId& target,
                           double tol_domain = kDefaultTolDomain);

}  // namespace grassmann
