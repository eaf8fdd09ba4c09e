#include "grassmann/restricted.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "grassmann/error.hpp"
#include "grassmann/random.hpp"

namespace grassmann {

namespace {

double ideal_norm(const Mat& m, double p) {
  if (p == 0.0) return operator_norm(m);
  return schatten_value(singular_values(m), p);
}

void check_index(double p) {
  if (!(p == 0.0 || p >= 1.0))
    throw Error(ErrorKind::invalid_argument, "Schatten index must be 0 or >= 1");
}

Mat unit_columns(const PolarizedModel& model, bool plus) {
  const Index n = model.ambient_dim();
  const Index count = plus ? model.n_plus() : model.n_minus();
  Mat b = Mat::Zero(n, count);
  for (Index j = 1; j <= count; ++j)
    b(plus ? model.plus_index(j) : model.minus_index(j), j - 1) = 1.0;
  return b;
}

constexpr std::uint64_t kPhaseStream = 0x6b;

}  // namespace

// ---------------------------------------------------------------------------
// PolarizedModel

PolarizedModel::PolarizedModel(Index n_minus, Index n_plus)
    : n_minus_(n_minus), n_plus_(n_plus) {
  if (n_minus < 0 || n_plus < 0)
    throw Error(ErrorKind::invalid_argument, "negative truncation size");
  Index next = 0;
  for (Index level = 1; level <= std::max(n_minus, n_plus); ++level) {
    if (level <= n_plus) plus_.push_back(next++);
    if (level <= n_minus) minus_.push_back(next++);
  }
  const Index n = ambient_dim();
  p_plus_ = Mat::Zero(n, n);
  p_minus_ = Mat::Zero(n, n);
  for (Index i : plus_) p_plus_(i, i) = 1.0;
  for (Index i : minus_) p_minus_(i, i) = 1.0;
}

Index PolarizedModel::plus_index(Index j) const {
  if (j < 1 || j > n_plus_) throw Error(ErrorKind::invalid_argument, "plus index out of range");
  return plus_[static_cast<std::size_t>(j - 1)];
}

Index PolarizedModel::minus_index(Index j) const {
  if (j < 1 || j > n_minus_) throw Error(ErrorKind::invalid_argument, "minus index out of range");
  return minus_[static_cast<std::size_t>(j - 1)];
}

Mat PolarizedModel::plus_rows(const Mat& m) const {
  Mat out(n_plus_, m.cols());
  for (Index j = 0; j < n_plus_; ++j) out.row(j) = m.row(plus_[static_cast<std::size_t>(j)]);
  return out;
}

Mat PolarizedModel::minus_rows(const Mat& m) const {
  Mat out(n_minus_, m.cols());
  for (Index j = 0; j < n_minus_; ++j) out.row(j) = m.row(minus_[static_cast<std::size_t>(j)]);
  return out;
}

Subspace PolarizedModel::plus_space() const {
  return Subspace::from_orthonormal(unit_columns(*this, true));
}

Subspace PolarizedModel::minus_space() const {
  return Subspace::from_orthonormal(unit_columns(*this, false));
}

// ---------------------------------------------------------------------------
// Membership

RestrictedPoint is_restricted_point(const Subspace& w, const PolarizedModel& model, double p) {
  check_index(p);
  if (w.ambient_dim() != model.ambient_dim())
    throw Error(ErrorKind::dimension_mismatch, "W does not live in the model's space");
  RestrictedPoint out{w};
  out.p = p;
  out.diff_norm = ideal_norm(w.projector() - model.p_plus(), p);
  out.virtual_dim = virtual_dimension(w, model);
  out.minus_norm = ideal_norm(model.minus_rows(w.basis()), p);

  const RVec sigma = singular_values(model.plus_rows(w.basis()));
  out.fredholm_gap = 0.0;
  for (Index i = sigma.size(); i-- > 0;)
    if (sigma[i] > 1e-10) {
      out.fredholm_gap = sigma[i];
      break;
    }
  return out;
}

int virtual_dimension(const Subspace& w, const PolarizedModel& model) {
  if (w.ambient_dim() != model.ambient_dim())
    throw Error(ErrorKind::dimension_mismatch, "W does not live in the model's space");
  return static_cast<int>(w.dim() - model.n_plus());
}

int virtual_dimension_by_rank(const Subspace& w, const PolarizedModel& model, double tol) {
  if (w.ambient_dim() != model.ambient_dim())
    throw Error(ErrorKind::dimension_mismatch, "W does not live in the model's space");
  const RVec sigma = singular_values(model.plus_rows(w.basis()));
  Index rank = 0;
  for (Index i = 0; i < sigma.size(); ++i)
    if (sigma[i] > tol) ++rank;
  const Index kernel = w.dim() - rank;
  const Index cokernel = model.n_plus() - rank;
  return static_cast<int>(kernel - cokernel);
}

RestrictedPoint gen_restricted_point(const PolarizedModel& model, double p,
                                     const DecayProfile& profile, int target,
                                     std::uint64_t seed) {
  check_index(p);
  profile.validate(true);
  const Index n_plus = model.n_plus();
  const Index n_minus = model.n_minus();
  if (target > 0 && (target > n_plus || target > n_minus))
    throw Error(ErrorKind::invalid_argument, "virtual dimension does not fit the model");
  if (target < 0 && -target > n_plus)
    throw Error(ErrorKind::invalid_argument, "virtual dimension does not fit the model");

  std::vector<Vec> columns;
  for (Index j = 1; j <= n_plus; ++j) {
    Vec e_plus = Vec::Zero(model.ambient_dim());
    e_plus(model.plus_index(j)) = 1.0;
    if (target > 0 && j <= target) {
      Vec e_minus = Vec::Zero(model.ambient_dim());
      e_minus(model.minus_index(j)) = 1.0;
      columns.push_back(std::move(e_plus));
      columns.push_back(std::move(e_minus));
      continue;
    }
    if (target < 0 && j <= -target) continue;
    if (j <= n_minus) {
      const double sigma = profile.value(j);
      const double norm = std::sqrt(1.0 + sigma * sigma);
      e_plus(model.plus_index(j)) = 1.0 / norm;
      e_plus(model.minus_index(j)) =
          sigma * hashed_phase(seed, kPhaseStream, static_cast<std::uint64_t>(j)) / norm;
    }
    columns.push_back(std::move(e_plus));
  }
  Mat basis(model.ambient_dim(), static_cast<Index>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c) basis.col(static_cast<Index>(c)) = columns[c];
  return is_restricted_point(Subspace::from_orthonormal(basis), model, p);
}

TruncationLadder make_ladder(const std::vector<std::pair<Index, Index>>& dims, double p,
                             const DecayProfile& profile, int target, std::uint64_t seed) {
  TruncationLadder ladder;
  ladder.dims = dims;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    const PolarizedModel model(dims[i].first, dims[i].second);
    ladder.instances.push_back(gen_restricted_point(model, p, profile, target, seed));
    if (i > 0 && !embeds_exactly(ladder.instances[i - 1].W.basis(),
                                 ladder.instances[i].W.basis()))
      throw Error(ErrorKind::ladder_mismatch,
                  "rung " + std::to_string(i) + " does not extend the previous one");
  }
  return ladder;
}

// ---------------------------------------------------------------------------
// Precotangent fibers

ClassTag precotangent_class(double model_p) {
  if (model_p == 0.0)
    throw Error(ErrorKind::predual_unavailable,
                "the compact ideal has no predual, so there is no precotangent fiber");
  if (model_p == kBoundedModel) return ClassTag::trace_class_emulated;
  if (model_p == 1.0) return ClassTag::compact_emulated;
  if (model_p > 1.0) return ClassTag::unrestricted;
  throw Error(ErrorKind::invalid_argument, "model index must be 0, >= 1, or bounded");
}

Covector make_precotangent(const ChartPoint& at, Mat mu, double model_p,
                           const DecayProfile& decay) {
  const ClassTag tag = precotangent_class(model_p);
  return Covector(at, std::move(mu), tag, decay);
}

Mat gen_ladder_covector(Index rows, Index cols, const DecayProfile& profile,
                        std::uint64_t seed) {
  profile.validate(false);
  Mat mu(rows, cols);
  for (Index b = 0; b < cols; ++b)
    for (Index a = 0; a < rows; ++a)
      mu(a, b) = profile.value(a) * profile.value(b) *
                 hashed_phase(seed, static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b));
  return mu;
}

// ---------------------------------------------------------------------------
// Experiment families

namespace {

ChartId plus_chart(const PolarizedModel& model) {
  return ChartId(model.plus_space(), model.minus_space(), ChartFlavor::hilbert);
}

Covector rung_covector(const ChartPoint& at, const DecayProfile& profile, std::uint64_t seed) {
  Mat mu = gen_ladder_covector(at.A.cols(), at.A.rows(), profile, seed);
  return make_precotangent(at, std::move(mu), kBoundedModel, profile);
}

}  // namespace

RungBuilder identity_family(const DecayProfile& mu_profile, std::uint64_t seed) {
  return [=](const PolarizedModel& model) {
    const ChartId source = plus_chart(model);
    const RestrictedPoint u =
        gen_restricted_point(model, 1.0, DecayProfile::geometric(0.3), 0, seed + 1);
    const ChartPoint at = chart_forward(u.W, source);
    return RungInstance{rung_covector(at, mu_profile, seed), source};
  };
}

RungBuilder swap_family(cplx t, const DecayProfile& mu_profile, std::uint64_t seed) {
  return [=](const PolarizedModel& model) {
    if (model.n_minus() != model.n_plus())
      throw Error(ErrorKind::invalid_argument, "swap family needs n_minus == n_plus");
    const ChartId source = plus_chart(model);
    const ChartId target(model.minus_space(), model.plus_space(), ChartFlavor::hilbert);
    const Index n = model.n_plus();
    const ChartPoint at(source, t * Mat::Identity(n, n));
    return RungInstance{rung_covector(at, mu_profile, seed), target};
  };
}

RungBuilder seeded_family(const DecayProfile& mu_profile, std::uint64_t seed) {
  return [=](const PolarizedModel& model) {
    const ChartId source = plus_chart(model);
    const RestrictedPoint u =
        gen_restricted_point(model, 1.0, DecayProfile::geometric(0.3), 0, seed + 1);
    const RestrictedPoint w =
        gen_restricted_point(model, 1.0, DecayProfile::geometric(0.4), 0, seed + 2);
    const ChartPoint at = chart_forward(u.W, source);
    return RungInstance{rung_covector(at, mu_profile, seed), ChartId::hilbert(w.W)};
  };
}

// ---------------------------------------------------------------------------
// Experiment

ExperimentReport preservation_experiment(const std::vector<Index>& dims, double p,
                                         const RungBuilder& build, ExecPolicy policy,
                                         Index tail_cutoff) {
  check_index(p);
  for (std::size_t i = 1; i < dims.size(); ++i)
    if (dims[i] <= dims[i - 1])
      throw Error(ErrorKind::ladder_mismatch, "ladder dims must be strictly increasing");

  ExperimentReport report;
  report.p = p;
  report.dims = dims;
  report.per_rung = parallel_map<RungResult>(dims.size(), policy, [&](std::size_t i) {
    RungResult rung;
    rung.dim = dims[i];
    const PolarizedModel model(dims[i], dims[i]);
    try {
      const RungInstance inst = build(model);
      const Covector moved = transition_cotangent(inst.covector, inst.target);
      rung.mu_norm = ideal_norm(inst.covector.mu, p);
      rung.mu_prime_norm = ideal_norm(moved.mu, p);
      rung.constant = rung.mu_prime_norm / rung.mu_norm;
      if (p == 0.0) {
        const RVec sigma = singular_values(moved.mu);
        for (Index k = tail_cutoff; k < sigma.size(); ++k) rung.tail += sigma[k];
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::chart_domain_violation) throw;
      rung.skipped = true;
      rung.skip_reason = e.what();
    }
    return rung;
  });

  std::vector<double> live;
  for (const auto& r : report.per_rung)
    if (!r.skipped) {
      live.push_back(r.constant);
      report.constant = std::max(report.constant, r.constant);
    }
  if (live.size() < 3) {
    report.spread = std::numeric_limits<double>::infinity();
    report.pass = false;
    return report;
  }
  const auto top = std::vector<double>(live.end() - 3, live.end());
  const double hi = *std::max_element(top.begin(), top.end());
  const double lo = *std::min_element(top.begin(), top.end());
  report.spread = hi > 0.0 ? (hi - lo) / hi : 0.0;
  report.pass = report.spread <= kStabilizationSpread;
  return report;
}

nlohmann::json to_json(const ExperimentReport& report) {
  nlohmann::json rungs = nlohmann::json::array();
  for (const auto& r : report.per_rung) {
    nlohmann::json j{{"dim", r.dim},
                     {"mu_norm", r.mu_norm},
                     {"mu_prime_norm", r.mu_prime_norm},
                     {"constant", r.constant}};
    if (r.skipped) {
      j["skipped"] = true;
      j["reason"] = r.skip_reason;
    }
    if (report.p == 0.0) j["tail"] = r.tail;
    rungs.push_back(std::move(j));
  }
  nlohmann::json spread = std::isfinite(report.spread) ? nlohmann::json(report.spread)
                                                       : nlohmann::json(nullptr);
  return nlohmann::json{{"p", report.p},     {"dims", report.dims},
                        {"per_rung", rungs}, {"spread", spread},
                        {"pass", report.pass}};
}

}  // namespace grassmann
