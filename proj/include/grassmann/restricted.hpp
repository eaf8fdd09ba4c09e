#pragma once

// Truncated polarized Hilbert space ℋ = ℋ_− ⊕ ℋ_+, membership numbers for
// the p-restricted Grassmannian, virtual dimension, and the ladder
// experiments that track how covector classes behave under chart changes as
// the truncation grows.
//
// Coordinate order interleaves the two halves level by level
// (e_1, e_{-1}, e_2, e_{-2}, ...), so a model with (n, n) is the top-left
// corner of any model with (N, N), N ≥ n.

#include <cstdint>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "grassmann/atlas.hpp"
#include "grassmann/bundle.hpp"
#include "grassmann/opcore.hpp"
#include "grassmann/parallel.hpp"

namespace grassmann {

class PolarizedModel {
 public:
  PolarizedModel(Index n_minus, Index n_plus);

  Index n_minus() const { return n_minus_; }
  Index n_plus() const { return n_plus_; }
  Index ambient_dim() const { return n_minus_ + n_plus_; }

  /// Coordinate of e_j (j = 1..n_plus) and e_{-j} (j = 1..n_minus).
  Index plus_index(Index j) const;
  Index minus_index(Index j) const;

  const Mat& p_plus() const { return p_plus_; }
  const Mat& p_minus() const { return p_minus_; }

  /// Rows of `m` belonging to ℋ_+ (resp. ℋ_−), in the order j = 1, 2, ...
  Mat plus_rows(const Mat& m) const;
  Mat minus_rows(const Mat& m) const;

  Subspace plus_space() const;
  Subspace minus_space() const;

 private:
  Index n_minus_;
  Index n_plus_;
  std::vector<Index> plus_;
  std::vector<Index> minus_;
  Mat p_plus_;
  Mat p_minus_;
};

/// p = 0 stands for the compact ideal and is measured in operator norm.
struct RestrictedPoint {
  Subspace W;
  double p = 1.0;
  double diff_norm = 0.0;   // ‖P_W − P_+‖_p
  int virtual_dim = 0;      // dim W − n_plus
  /// Smallest singular value of p_+|_W above the rank threshold: the
  /// finite-scale stand-in for "closed range" in the Fredholm condition.
  double fredholm_gap = 0.0;
  double minus_norm = 0.0;  // ‖p_−|_W‖_p
};

RestrictedPoint is_restricted_point(const Subspace& w, const PolarizedModel& model, double p);

int virtual_dimension(const Subspace& w, const PolarizedModel& model);

/// dim ker(p_+|_W) − dim coker(p_+|_W) from a rank count at `tol`.
int virtual_dimension_by_rank(const Subspace& w, const PolarizedModel& model,
                              double tol = 1e-10);

/// W = graph of K: ℋ_+ → ℋ_−, K e_j = σ_j φ_j e_{-j} with σ_j = profile(j)
/// (so geometric r gives r, r², ...) and seeded unit phases φ_j, then shifted
/// to virtual dimension `target`: for target > 0 the levels j ≤ target are
/// replaced by span(e_j, e_{-j}); for target < 0 the levels j ≤ |target| are
/// dropped. Basis columns are in level order, so a smaller model's basis is
/// exactly the top-left block of a larger one's. Throws bad_profile, or
/// invalid_argument if the target does not fit the model.
RestrictedPoint gen_restricted_point(const PolarizedModel& model, double p,
                                     const DecayProfile& profile, int target,
                                     std::uint64_t seed);

struct TruncationLadder {
  std::vector<std::pair<Index, Index>> dims;
  std::vector<RestrictedPoint> instances;
};

/// One generated point per rung, all from the same profile and seed. Throws
/// ladder_mismatch if some rung's basis is not the top-left block of the
/// next one's.
TruncationLadder make_ladder(const std::vector<std::pair<Index, Index>>& dims, double p,
                             const DecayProfile& profile, int target, std::uint64_t seed);

/// Model index of an ordinary Hilbert Grassmannian (bounded coordinates).
inline constexpr double kBoundedModel = std::numeric_limits<double>::infinity();

/// Fiber class of the precotangent bundle over a manifold modeled on L^p:
/// bounded → trace class, p = 1 → compact, p > 1 → the cotangent fiber
/// itself (reflexive case), p = 0 → none (predual_unavailable).
ClassTag precotangent_class(double model_p);

/// A covector tagged with precotangent_class(model_p).
Covector make_precotangent(const ChartPoint& at, Mat mu, double model_p,
                           const DecayProfile& decay);

/// k×m covector in a polarized model with |μ_ab| = σ_a σ_b from `profile`
/// times a seeded phase; entries depend only on (a, b, seed), so rungs of a
/// ladder embed exactly.
Mat gen_ladder_covector(Index rows, Index cols, const DecayProfile& profile,
                        std::uint64_t seed);

struct RungInstance {
  Covector covector;
  ChartId target;
};

/// Builds the experiment instance for one truncation (n, n).
using RungBuilder = std::function<RungInstance(const PolarizedModel&)>;

/// Source chart ℋ_+ (hilbert), base point and target both the identity chart.
RungBuilder identity_family(const DecayProfile& mu_profile, std::uint64_t seed);

/// ℋ_+ → ℋ_− chart swap at A = t·J (J e_j = e_{-j}); every level is the ℂ²
/// swap, so ‖μ'‖_1 = |t|²·‖μ‖_1 exactly.
RungBuilder swap_family(cplx t, const DecayProfile& mu_profile, std::uint64_t seed);

/// Source chart ℋ_+, base point and target chart both generated restricted
/// points (geometric ratios 0.3 and 0.4, virtual dimension 0).
RungBuilder seeded_family(const DecayProfile& mu_profile, std::uint64_t seed);

struct RungResult {
  Index dim = 0;
  bool skipped = false;
  std::string skip_reason;
  double mu_norm = 0.0;
  double mu_prime_norm = 0.0;
  double constant = 0.0;
  /// Σ_{k ≥ cutoff} σ_k(μ'), reported for p = 0.
  double tail = 0.0;
};

struct ExperimentReport {
  double p = 1.0;
  std::vector<Index> dims;
  std::vector<RungResult> per_rung;
  double constant = 0.0;  // sup over non-skipped rungs
  double spread = 0.0;    // (max − min)/max of the constant over the top three rungs
  bool pass = false;
};

constexpr double kStabilizationSpread = 0.05;

/// For each n in `dims` builds the rung on the model (n, n), pushes the
/// covector through transition_cotangent and records ‖μ‖_p, ‖μ'‖_p and their
/// ratio. p = 1 uses the trace norm; p = 0 uses the operator norm plus the
/// singular tail beyond `tail_cutoff`. A chart_domain_violation turns the rung
/// into a skipped one. Passes when the top three non-skipped rungs have
/// spread ≤ 5%. Rungs run under `policy`; results are merged in dim order.
ExperimentReport preservation_experiment(const std::vector<Index>& dims, double p,
                                         const RungBuilder& build,
                                         ExecPolicy policy = ExecPolicy::openmp,
                                         Index tail_cutoff = 8);

/// {p, dims, per_rung: [{dim, mu_norm, mu_prime_norm, constant}], spread, pass}
nlohmann::json to_json(const ExperimentReport& report);

}  // namespace grassmann
