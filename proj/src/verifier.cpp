#include "grassmann/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "grassmann/atlas.hpp"
#include "grassmann/bundle.hpp"
#include "grassmann/error.hpp"
#include "grassmann/opcore.hpp"
#include "grassmann/oracles.hpp"
#include "grassmann/random.hpp"
#include "grassmann/restricted.hpp"

namespace grassmann {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Rejection thresholds for random instances: charts must split with
// conditioning above this, and points must sit this far inside a domain.
constexpr double kWellConditioned = 1e-3;

constexpr CheckSpec kRegistry[] = {
    // opcore
    {"opcore.projection_identities", SuiteId::atlas, "projection_eps", 1e-12,
     "oblique projections are idempotent and complementary ones sum to the identity, "
     "to tol*(1+|pi|)"},
    {"opcore.schatten_ideal", SuiteId::atlas, "ideal_eps", 1e-12,
     "|T X S|_p <= |T| |X|_p |S| for p in {1,2,3} (relative excess)"},
    {"opcore.schatten_unitary_invariance", SuiteId::atlas, "unitary_eps", 1e-10,
     "Schatten norms are invariant under U T V for unitary U, V (relative)"},
    {"opcore.schatten_monotonicity", SuiteId::atlas, "monotonicity_eps", 1e-12,
     "|T|_1 >= |T|_2 >= |T|_3 >= |T| (relative excess)"},
    // grassmann_atlas
    {"atlas.roundtrip", SuiteId::atlas, "roundtrip_eps", 1e-10,
     "chart_forward(chart_inverse(A)) = A and chart_inverse(chart_forward(H)) = H "
     "(|dA|/(1+|A|), projector distance)"},
    {"atlas.transition_consistency", SuiteId::atlas, "transition_eps", 1e-10,
     "transition_base agrees with chart_forward(chart_inverse(.)) (|dA'|/(1+|A'|))"},
    {"atlas.cocycle", SuiteId::atlas, "cocycle_eps", 1e-9,
     "psi_CB(psi_BA(x)) = psi_CA(x) on triple overlaps (relative)"},
    {"atlas.covering", SuiteId::atlas, "covering_violations", 0.0,
     "some chart of a random-complement pool contains each H with conditioning > tol_domain"},
    {"atlas.hilbert_specialization", SuiteId::atlas, "hilbert_eps", 1e-11,
     "projector chart formula equals the split-pair coordinate formula when G = F^perp"},
    {"atlas.near_boundary", SuiteId::atlas, "near_boundary_violations", 0.0,
     "points with domain conditioning in [1e-7, 1e-5] are accepted at tol_domain 1e-8 "
     "and refused with ChartDomainViolation at 1e-4"},
    // bundle_calculus
    {"bundles.jacobian_central", SuiteId::bundles, "jacobian_fd_eps", 1e-6,
     "tangent fiber map matches central differences of transition_base, h = 1e-5 (relative)"},
    {"bundles.jacobian_complex_step", SuiteId::bundles, "jacobian_cs_eps", 1e-10,
     "tangent fiber map matches the complex-step derivative (|d|/max(1,|J|))"},
    {"bundles.tangent_linearity", SuiteId::bundles, "linearity_eps", 1e-11,
     "tangent fiber map is linear in X (relative)"},
    {"bundles.duality_invariance", SuiteId::bundles, "duality_eps", 1e-9,
     "|Tr(mu'X') - Tr(mu X)| <= tol*(1+|Tr(mu X)|) across chart changes"},
    {"bundles.contravariant_functoriality", SuiteId::bundles, "functoriality_eps", 1e-9,
     "cotangent transition A->B->C equals A->C (relative)"},
    {"bundles.tensor_commuting_square", SuiteId::bundles, "square_eps", 1e-10,
     "tensor pushforward (S_j x_i, T_j^T y_i) equals the operator cotangent transition"},
    {"bundles.projector_cotangent_formula", SuiteId::bundles, "projector_formula_eps", 1e-10,
     "tensor pushforward equals the orthogonal-projector cotangent formula (hilbert charts)"},
    {"bundles.pairing_bilinearity", SuiteId::bundles, "bilinearity_eps", 1e-12,
     "trace and tensor pairings are bilinear in each argument"},
    // restricted
    {"restricted.virtual_dimension_invariance", SuiteId::restricted, "virtual_dim_violations", 0.0,
     "virtual dimension (both routes) is unchanged by transitions between matching charts"},
    {"restricted.diff_norm_unitary_invariance", SuiteId::restricted, "restricted_unitary_eps",
     1e-10, "|P_W - P_+|_p is invariant under polarization-preserving unitaries (relative)"},
    {"restricted.membership_envelope", SuiteId::restricted, "envelope_violations", 0.0,
     "generated points have fredholm gap > 1e-3 and "
     "|p_-|_p <= |P_W-P_+|_p <= (2+|P_W-P_+|_p)|p_-|_p + |virtual dim|"},
    {"restricted.ladder_embedding", SuiteId::restricted, "embedding_violations", 0.0,
     "smaller ladder rungs are the exact top-left blocks of larger ones"},
    {"restricted.preservation_trace_class", SuiteId::restricted, "preservation_spread", 0.05,
     "trace-class covector transition constant stabilizes over the top three ladder rungs"},
    {"restricted.preservation_compact", SuiteId::restricted, "compact_spread", 0.05,
     "compact covector (operator norm) transition constant stabilizes over the ladder"},
    {"restricted.preservation_closed_form", SuiteId::restricted, "closed_form_eps", 1e-8,
     "swap-chart transition constant equals |t|^2 at every rung"},
    {"restricted.predual_unavailable", SuiteId::restricted, "predual_violations", 0.0,
     "a precotangent fiber at p = 0 is refused with PredualUnavailable; p = 1, 2, bounded "
     "get compact, cotangent and trace-class tags"},
};

bool is_count_check(const CheckSpec& spec) { return spec.default_tolerance == 0.0; }

// ---------------------------------------------------------------------------
// Random instances

Index draw_index(Rng& rng, Index lo, Index hi) {
  return std::uniform_int_distribution<Index>(lo, hi)(rng);
}

double draw_real(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

cplx draw_scalar(Rng& rng) { return gaussian_matrix(1, 1, rng)(0, 0); }

Subspace random_subspace(Index n, Index k, Rng& rng) {
  return Subspace::from_spanning(gaussian_matrix(n, k, rng));
}

ChartFlavor random_flavor(Rng& rng) {
  return draw_index(rng, 0, 1) == 0 ? ChartFlavor::general : ChartFlavor::hilbert;
}

ChartId chart_on(Subspace f, ChartFlavor flavor, Rng& rng) {
  if (flavor == ChartFlavor::hilbert) return ChartId::hilbert(std::move(f));
  const Index n = f.ambient_dim();
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Subspace g = random_subspace(n, n - f.dim(), rng);
    try {
      ChartId chart(f, std::move(g), ChartFlavor::general, kWellConditioned);
      return chart;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::split_failure) throw;
    }
  }
  throw Error(ErrorKind::split_failure, "could not draw a complementary G");
}

ChartId random_chart(Index n, Index k, Rng& rng, ChartFlavor flavor) {
  return chart_on(random_subspace(n, k, rng), flavor, rng);
}

Mat random_coordinates(const ChartId& chart, Rng& rng, double scale = 1.0) {
  const Index n = chart.ambient_dim();
  return gaussian_matrix(chart.g().dim(), chart.f().dim(), rng) *
         (scale / std::sqrt(static_cast<double>(n)));
}

ChartPoint random_point(Index n, Index k, Rng& rng) {
  ChartId chart = random_chart(n, k, rng, random_flavor(rng));
  Mat a = random_coordinates(chart, rng);
  return ChartPoint(std::move(chart), std::move(a));
}

ChartId chart_containing(const Subspace& h, Rng& rng, ChartFlavor flavor) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    ChartId chart = random_chart(h.ambient_dim(), h.dim(), rng, flavor);
    if (in_chart_domain(h, chart).conditioning > kWellConditioned) return chart;
  }
  throw Error(ErrorKind::chart_domain_violation, "could not draw a chart containing H");
}

Index draw_k(Index n, Rng& rng) { return draw_index(rng, 1, n - 1); }

double rel(const Mat& diff, const Mat& ref) { return diff.norm() / (1.0 + ref.norm()); }

// ---------------------------------------------------------------------------
// Trial driver

using TrialFn = std::function<double(Index dim, Rng& rng)>;

CheckResult run_trials(const SuiteConfig& cfg, const CheckSpec& spec, double tolerance,
                       int per_dim, const TrialFn& trial) {
  const std::size_t total = static_cast<std::size_t>(per_dim) * cfg.dims.size();
  const std::uint64_t stream = stable_hash(spec.name);
  const auto errors = parallel_map<double>(total, cfg.exec, [&](std::size_t t) {
    const Index dim = cfg.dims[t / static_cast<std::size_t>(per_dim)];
    Rng rng(derive_seed(cfg.seed, stream, t));
    try {
      return trial(dim, rng);
    } catch (const Error&) {
      // An instance the check could not even evaluate counts as a failure.
      return is_count_check(spec) ? 1.0 : kInf;
    }
  });

  CheckResult r;
  r.name = spec.name;
  r.trials = static_cast<int>(total);
  r.tolerance = tolerance;
  std::size_t worst = 0;
  double acc = 0.0;
  for (std::size_t t = 0; t < total; ++t) {
    const double e = std::isnan(errors[t]) ? kInf : errors[t];
    if (is_count_check(spec))
      acc += e;
    else
      acc = std::max(acc, e);
    if (e > errors[worst] || (std::isnan(errors[worst]))) worst = t;
  }
  r.max_abs_error = acc;
  if (total > 0 && errors[worst] > 0.0) r.worst_seed = derive_seed(cfg.seed, stream, worst);
  r.pass = r.max_abs_error <= tolerance;
  return r;
}

CheckResult single_result(const CheckSpec& spec, double tolerance, double error, int trials) {
  CheckResult r;
  r.name = spec.name;
  r.trials = trials;
  r.tolerance = tolerance;
  r.max_abs_error = std::isnan(error) ? kInf : error;
  r.pass = r.max_abs_error <= tolerance;
  return r;
}

// ---------------------------------------------------------------------------
// opcore

double trial_projection_identities(Index n, Rng& rng) {
  const Index k = draw_k(n, rng);
  const ChartId chart = random_chart(n, k, rng, ChartFlavor::general);
  const ObliqueProjections pr = oblique_projections(chart.f(), chart.g());
  const Mat id = Mat::Identity(n, n);
  const double scale = 1.0 + std::max(operator_norm(pr.onto_f), operator_norm(pr.onto_g));
  double e = operator_norm(pr.onto_f * pr.onto_f - pr.onto_f);
  e = std::max(e, operator_norm(pr.onto_g * pr.onto_g - pr.onto_g));
  e = std::max(e, operator_norm(pr.onto_f + pr.onto_g - id));
  return e / scale;
}

double trial_schatten_ideal(Index n, Rng& rng) {
  const Mat t = gaussian_matrix(n, n, rng);
  const Mat x = gen_decay_operator(n, n, DecayProfile::geometric(draw_real(rng, 0.2, 0.9)),
                                   rng());
  const Mat s = gaussian_matrix(n, n, rng);
  const double bound_ts = operator_norm(t) * operator_norm(s);
  double worst = 0.0;
  for (double p : {1.0, 2.0, 3.0}) {
    const double lhs = schatten_norm(t * x * s, p).value;
    const double rhs = bound_ts * schatten_norm(x, p).value;
    worst = std::max(worst, (lhs - rhs) / rhs);
  }
  return worst;
}

double trial_unitary_invariance(Index n, Rng& rng) {
  const Mat t = gaussian_matrix(n, n, rng);
  const Mat u = haar_unitary(n, rng);
  const Mat v = haar_unitary(n, rng);
  double worst = 0.0;
  for (double p : {1.0, 2.0, 3.0}) {
    const double a = schatten_norm(t, p).value;
    const double b = schatten_norm(u * t * v, p).value;
    worst = std::max(worst, std::abs(a - b) / a);
  }
  return worst;
}

double trial_monotonicity(Index n, Rng& rng) {
  const Mat t = gaussian_matrix(n, draw_index(rng, 1, n), rng);
  const RVec s = singular_values(t);
  const double n1 = schatten_value(s, 1.0);
  const double n2 = schatten_value(s, 2.0);
  const double n3 = schatten_value(s, 3.0);
  const double ninf = s[0];
  double worst = 0.0;
  worst = std::max(worst, (n2 - n1) / n1);
  worst = std::max(worst, (n3 - n2) / n2);
  worst = std::max(worst, (ninf - n3) / n3);
  return worst;
}

// ---------------------------------------------------------------------------
// atlas

double trial_roundtrip(Index n, Rng& rng) {
  const Index k = draw_k(n, rng);
  const ChartPoint pt = random_point(n, k, rng);
  const Mat back = chart_forward(chart_inverse(pt), pt.chart).A;
  double e = rel(back - pt.A, pt.A);

  const Subspace h = random_subspace(n, k, rng);
  const ChartId chart = chart_containing(h, rng, random_flavor(rng));
  const Subspace again = chart_inverse(chart_forward(h, chart));
  e = std::max(e, projector_distance(h, again));
  return e;
}

double trial_transition_consistency(Index n, Rng& rng) {
  const ChartPoint pt = random_point(n, draw_k(n, rng), rng);
  const ChartId target = chart_containing(chart_inverse(pt), rng, random_flavor(rng));
  const Mat direct = transition_base(pt, target).A;
  return rel(direct - oracle::transition_via_graph(pt, target), direct);
}

double trial_cocycle(Index n, Rng& rng) {
  const ChartPoint pt = random_point(n, draw_k(n, rng), rng);
  const Subspace h = chart_inverse(pt);
  const ChartId b = chart_containing(h, rng, random_flavor(rng));
  const ChartId c = chart_containing(h, rng, random_flavor(rng));
  const Mat two_step = transition_base(transition_base(pt, b), c).A;
  const Mat one_step = transition_base(pt, c).A;
  return rel(two_step - one_step, one_step);
}

double trial_covering(Index n, Rng& rng) {
  const Index k = draw_k(n, rng);
  const Subspace h = random_subspace(n, k, rng);
  for (int i = 0; i < 8; ++i) {
    const ChartId chart = random_chart(n, k, rng, ChartFlavor::general);
    if (in_chart_domain(h, chart).conditioning > kDefaultTolDomain) return 0.0;
  }
  return 1.0;
}

double trial_hilbert_specialization(Index n, Rng& rng) {
  const Index k = draw_k(n, rng);
  const Subspace w = random_subspace(n, k, rng);
  const ChartId chart = chart_containing(w, rng, ChartFlavor::hilbert);
  const Mat general = chart_forward(w, chart).A;
  const Mat projector = hilbert_chart_coordinates(w, chart);
  return rel(general - projector, general);
}

template <class Fn>
bool refuses_with(ErrorKind kind, Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind() == kind;
  }
  return false;
}

double trial_near_boundary(Index n, Rng& rng) {
  const Index k = draw_k(n, rng);
  const Index m = n - k;
  const ChartId chart = ChartId::hilbert(random_subspace(n, k, rng));
  // Conditioning of the graph of s·u·vᴴ is exactly 1/sqrt(1 + s²).
  const double s = std::pow(10.0, draw_real(rng, 5.0, 7.0));
  Vec u = gaussian_matrix(m, 1, rng).col(0);
  Vec v = gaussian_matrix(k, 1, rng).col(0);
  u.normalize();
  v.normalize();
  const Subspace h = chart_inverse(ChartPoint(chart, s * u * v.adjoint()));

  double violations = 0.0;
  const DomainReport d = in_chart_domain(h, chart);
  if (!d.inside || d.conditioning < 1e-7 * 0.5 || d.conditioning > 1e-5 * 2.0) violations += 1;
  if (!refuses_with(ErrorKind::chart_domain_violation, [&] { chart_forward(h, chart, 1e-4); }))
    violations += 1;

  const ChartId source = chart_containing(h, rng, random_flavor(rng));
  const ChartPoint pt = chart_forward(h, source);
  if (!refuses_with(ErrorKind::chart_domain_violation,
                    [&] { transition_base(pt, chart, 1e-4); }))
    violations += 1;
  try {
    transition_base(pt, chart);
  } catch (const Error&) {
    violations += 1;
  }
  return violations;
}

// ---------------------------------------------------------------------------
// bundles

struct Transition {
  ChartPoint pt;
  ChartId target;
};

Transition random_transition(Index n, Rng& rng) {
  ChartPoint pt = random_point(n, draw_k(n, rng), rng);
  ChartId target = chart_containing(chart_inverse(pt), rng, random_flavor(rng));
  return Transition{std::move(pt), std::move(target)};
}

Mat random_tangent(const ChartPoint& pt, Rng& rng) { return random_coordinates(pt.chart, rng); }

Mat random_covector(const ChartPoint& pt, Rng& rng) {
  return random_coordinates(pt.chart, rng).transpose();
}

double trial_jacobian_central(Index n, Rng& rng) {
  const Transition tr = random_transition(n, rng);
  const Mat x = random_tangent(tr.pt, rng);
  const Mat j = transition_tangent(TangentVector(tr.pt, x), tr.target).X;
  const Mat fd = oracle::central_difference(tr.pt, tr.target, x);
  return (j - fd).norm() / std::max(j.norm(), std::numeric_limits<double>::min());
}

double trial_jacobian_complex_step(Index n, Rng& rng) {
  const Transition tr = random_transition(n, rng);
  const Mat x = random_tangent(tr.pt, rng);
  const Mat j = transition_tangent(TangentVector(tr.pt, x), tr.target).X;
  const Mat cs = oracle::complex_step_derivative(tr.pt, tr.target, x);
  return (j - cs).norm() / std::max(1.0, j.norm());
}

double trial_tangent_linearity(Index n, Rng& rng) {
  const Transition tr = random_transition(n, rng);
  const Mat x = random_tangent(tr.pt, rng);
  const Mat y = random_tangent(tr.pt, rng);
  const cplx a = draw_scalar(rng);
  const cplx b = draw_scalar(rng);
  auto image = [&](const Mat& v) {
    return transition_tangent(TangentVector(tr.pt, v), tr.target).X;
  };
  const Mat lhs = image(a * x + b * y);
  const Mat rhs = a * image(x) + b * image(y);
  return rel(lhs - rhs, rhs);
}

double trial_duality(Index n, Rng& rng) {
  const Transition tr = random_transition(n, rng);
  const Covector c(tr.pt, random_covector(tr.pt, rng));
  const TangentVector v(tr.pt, random_tangent(tr.pt, rng));
  const cplx before = pair_trace(c, v);
  const cplx after = pair_trace(transition_cotangent(c, tr.target),
                                transition_tangent(v, tr.target));
  return std::abs(after - before) / (1.0 + std::abs(before));
}

double trial_functoriality(Index n, Rng& rng) {
  const Transition tr = random_transition(n, rng);
  const Subspace h = chart_inverse(tr.pt);
  const ChartId last = chart_containing(h, rng, random_flavor(rng));
  const Covector c(tr.pt, random_covector(tr.pt, rng));
  const Mat two_step = transition_cotangent(transition_cotangent(c, tr.target), last).mu;
  const Mat direct = transition_cotangent(c, last).mu;
  return rel(two_step - direct, direct);
}

double trial_commuting_square(Index n, Rng& rng) {
  const Transition tr = random_transition(n, rng);
  const Covector c(tr.pt, random_covector(tr.pt, rng));
  const auto factors = cotangent_factors(tr.pt, tr.target);
  const TensorCovector pushed = pushforward_tensor(operator_to_tensor(c), factors, tr.target);
  const Mat via_tensor = tensor_to_operator(pushed).mu;
  const Mat via_operator = transition_cotangent(c, tr.target).mu;
  return rel(via_tensor - via_operator, via_operator);
}

double trial_projector_formula(Index n, Rng& rng) {
  const Index k = draw_k(n, rng);
  const ChartId source = ChartId::hilbert(random_subspace(n, k, rng));
  const ChartPoint pt(source, random_coordinates(source, rng));
  const ChartId target = chart_containing(chart_inverse(pt), rng, ChartFlavor::hilbert);
  const Covector c(pt, random_covector(pt, rng));
  const auto factors = cotangent_factors(pt, target);
  const Mat via_tensor =
      tensor_to_operator(pushforward_tensor(operator_to_tensor(c), factors, target)).mu;
  const Mat via_projectors = hilbert_cotangent_formula(c, target);
  return rel(via_tensor - via_projectors, via_projectors);
}

double trial_bilinearity(Index n, Rng& rng) {
  const ChartPoint pt = random_point(n, draw_k(n, rng), rng);
  const Covector c1(pt, random_covector(pt, rng));
  const Covector c2(pt, random_covector(pt, rng));
  const TangentVector v1(pt, random_tangent(pt, rng));
  const TangentVector v2(pt, random_tangent(pt, rng));
  const cplx a = draw_scalar(rng);
  const cplx b = draw_scalar(rng);

  auto gap = [](cplx lhs, cplx p1, cplx p2, cplx a, cplx b) {
    return std::abs(lhs - (a * p1 + b * p2)) /
           (1.0 + std::abs(a) * std::abs(p1) + std::abs(b) * std::abs(p2));
  };
  double worst = 0.0;
  worst = std::max(worst, gap(pair_trace(Covector(pt, a * c1.mu + b * c2.mu), v1),
                              pair_trace(c1, v1), pair_trace(c2, v1), a, b));
  worst = std::max(worst, gap(pair_trace(c1, TangentVector(pt, a * v1.X + b * v2.X)),
                              pair_trace(c1, v1), pair_trace(c1, v2), a, b));

  const TensorCovector t1 = operator_to_tensor(c1);
  const TensorCovector t2 = operator_to_tensor(c2);
  std::vector<TensorTerm> mixed;
  for (const auto& term : t1.terms) mixed.push_back(TensorTerm{a * term.x, term.y});
  for (const auto& term : t2.terms) mixed.push_back(TensorTerm{b * term.x, term.y});
  worst = std::max(worst, gap(pair_tensor(v1, TensorCovector(pt, mixed)), pair_tensor(v1, t1),
                              pair_tensor(v1, t2), a, b));
  worst = std::max(worst, gap(pair_tensor(TangentVector(pt, a * v1.X + b * v2.X), t1),
                              pair_tensor(v1, t1), pair_tensor(v2, t1), a, b));
  return worst;
}

// ---------------------------------------------------------------------------
// restricted

PolarizedModel model_for(Index n) { return PolarizedModel(n / 2, n - n / 2); }

DecayProfile random_profile(Rng& rng) {
  if (draw_index(rng, 0, 1) == 0) return DecayProfile::geometric(draw_real(rng, 0.1, 0.8));
  return DecayProfile::power(draw_real(rng, 1.2, 3.0));
}

int random_virtual_dim(const PolarizedModel& model, Rng& rng) {
  const int lo = model.n_plus() >= 2 ? -1 : 0;
  const int hi = model.n_minus() >= 2 ? 1 : 0;
  return static_cast<int>(draw_index(rng, lo, hi));
}

double trial_virtual_dimension(Index n, Rng& rng) {
  const PolarizedModel model = model_for(n);
  const int v = random_virtual_dim(model, rng);
  auto chart_at = [&](std::uint64_t seed) {
    const RestrictedPoint base = gen_restricted_point(model, 1.0, random_profile(rng), v, seed);
    return chart_on(base.W, random_flavor(rng), rng);
  };
  const ChartId source = chart_at(rng());
  const ChartPoint pt(source, random_coordinates(source, rng, 0.3));
  const Subspace h = chart_inverse(pt);
  ChartId target = chart_at(rng());
  if (in_chart_domain(h, target).conditioning <= kWellConditioned)
    target = chart_containing(h, rng, random_flavor(rng));

  double violations = 0.0;
  const Subspace moved = chart_inverse(transition_base(pt, target));
  for (const Subspace* s : {&h, &moved}) {
    if (virtual_dimension(*s, model) != v) violations += 1;
    if (virtual_dimension_by_rank(*s, model) != v) violations += 1;
  }
  if (virtual_dimension(source.f(), model) != virtual_dimension(target.f(), model))
    violations += 1;
  return violations;
}

Mat polarization_unitary(const PolarizedModel& model, Rng& rng) {
  const Mat up = haar_unitary(model.n_plus(), rng);
  const Mat um = haar_unitary(model.n_minus(), rng);
  Mat u = Mat::Zero(model.ambient_dim(), model.ambient_dim());
  for (Index a = 1; a <= model.n_plus(); ++a)
    for (Index b = 1; b <= model.n_plus(); ++b)
      u(model.plus_index(a), model.plus_index(b)) = up(a - 1, b - 1);
  for (Index a = 1; a <= model.n_minus(); ++a)
    for (Index b = 1; b <= model.n_minus(); ++b)
      u(model.minus_index(a), model.minus_index(b)) = um(a - 1, b - 1);
  return u;
}

double trial_restricted_unitary(Index n, Rng& rng) {
  const PolarizedModel model = model_for(n);
  const double p = draw_index(rng, 0, 1) == 0 ? 1.0 : 2.0;
  const RestrictedPoint w =
      gen_restricted_point(model, p, random_profile(rng), random_virtual_dim(model, rng), rng());
  const Mat u = polarization_unitary(model, rng);
  const RestrictedPoint uw = is_restricted_point(Subspace::from_spanning(u * w.W.basis()), model, p);
  return std::abs(uw.diff_norm - w.diff_norm) / (1.0 + w.diff_norm);
}

double trial_envelope(Index n, Rng& rng) {
  const PolarizedModel model = model_for(n);
  const double p = draw_index(rng, 0, 1) == 0 ? 1.0 : 2.0;
  const int v = random_virtual_dim(model, rng);
  const RestrictedPoint w = gen_restricted_point(model, p, random_profile(rng), v, rng());
  const double slack = 1e-12 * (1.0 + w.diff_norm);
  double violations = 0.0;
  if (!(w.fredholm_gap > kWellConditioned)) violations += 1;
  if (w.minus_norm > w.diff_norm + slack) violations += 1;
  if (w.diff_norm > (2.0 + w.diff_norm) * w.minus_norm + std::abs(v) + slack) violations += 1;
  return violations;
}

double trial_ladder_embedding(Index n, Rng& rng) {
  const Index half = std::max<Index>(1, n / 2);
  const std::vector<std::pair<Index, Index>> dims{{half, half}, {2 * half, 2 * half},
                                                  {4 * half, 4 * half}};
  const int v = static_cast<int>(draw_index(rng, half >= 2 ? -1 : 0, 1));
  const DecayProfile profile = random_profile(rng);
  const std::uint64_t seed = rng();
  double violations = 0.0;
  try {
    make_ladder(dims, 1.0, profile, v, seed);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ladder_mismatch) throw;
    violations += 1;
  }
  Mat prev;
  for (const auto& [nm, np] : dims) {
    const Mat mu = gen_ladder_covector(np, nm, profile, seed);
    if (prev.size() > 0 && !embeds_exactly(prev, mu)) violations += 1;
    prev = mu;
  }
  return violations;
}

double trial_predual(Index n, Rng& rng) {
  const ChartPoint pt = random_point(n, draw_k(n, rng), rng);
  const Mat mu = random_covector(pt, rng);
  const DecayProfile decay = DecayProfile::geometric(0.5);
  double violations = 0.0;
  if (!refuses_with(ErrorKind::predual_unavailable,
                    [&] { make_precotangent(pt, mu, 0.0, decay); }))
    violations += 1;
  if (make_precotangent(pt, mu, 1.0, decay).tag != ClassTag::compact_emulated) violations += 1;
  if (make_precotangent(pt, mu, 2.0, decay).tag != ClassTag::unrestricted) violations += 1;
  if (make_precotangent(pt, mu, kBoundedModel, decay).tag != ClassTag::trace_class_emulated)
    violations += 1;
  return violations;
}

// ---------------------------------------------------------------------------

double tolerance_for(const SuiteConfig& cfg, const CheckSpec& spec) {
  const auto it = cfg.tolerances.find(spec.tolerance_key);
  return it == cfg.tolerances.end() ? spec.default_tolerance : it->second;
}

CheckResult run_check(const SuiteConfig& cfg, const CheckSpec& spec) {
  const std::string name = spec.name;
  const double tol = tolerance_for(cfg, spec);
  auto trials = [&](const TrialFn& fn, int per_dim) {
    return run_trials(cfg, spec, tol, per_dim, fn);
  };
  const int t = cfg.trials;

  if (name == "opcore.projection_identities") return trials(trial_projection_identities, t);
  if (name == "opcore.schatten_ideal") return trials(trial_schatten_ideal, 2 * t);
  if (name == "opcore.schatten_unitary_invariance") return trials(trial_unitary_invariance, t);
  if (name == "opcore.schatten_monotonicity") return trials(trial_monotonicity, t);
  if (name == "atlas.roundtrip") return trials(trial_roundtrip, t);
  if (name == "atlas.transition_consistency") return trials(trial_transition_consistency, t);
  if (name == "atlas.cocycle") return trials(trial_cocycle, t);
  if (name == "atlas.covering") return trials(trial_covering, t);
  if (name == "atlas.hilbert_specialization") return trials(trial_hilbert_specialization, t);
  if (name == "atlas.near_boundary") return trials(trial_near_boundary, t);
  if (name == "bundles.jacobian_central") return trials(trial_jacobian_central, t);
  if (name == "bundles.jacobian_complex_step") return trials(trial_jacobian_complex_step, t);
  if (name == "bundles.tangent_linearity") return trials(trial_tangent_linearity, t);
  if (name == "bundles.duality_invariance") return trials(trial_duality, 2 * t);
  if (name == "bundles.contravariant_functoriality") return trials(trial_functoriality, t);
  if (name == "bundles.tensor_commuting_square") return trials(trial_commuting_square, t);
  if (name == "bundles.projector_cotangent_formula") return trials(trial_projector_formula, t);
  if (name == "bundles.pairing_bilinearity") return trials(trial_bilinearity, t);
  if (name == "restricted.virtual_dimension_invariance") return trials(trial_virtual_dimension, t);
  if (name == "restricted.diff_norm_unitary_invariance") return trials(trial_restricted_unitary, t);
  if (name == "restricted.membership_envelope") return trials(trial_envelope, t);
  if (name == "restricted.ladder_embedding") return trials(trial_ladder_embedding, t);
  if (name == "restricted.predual_unavailable") return trials(trial_predual, t);

  const int rungs = static_cast<int>(cfg.ladder.size());
  try {
    if (name == "restricted.preservation_trace_class") {
      const ExperimentReport rep = preservation_experiment(
          cfg.ladder, 1.0, seeded_family(DecayProfile::geometric(0.5), cfg.seed), cfg.exec);
      return single_result(spec, tol, rep.spread, rungs);
    }
    if (name == "restricted.preservation_compact") {
      const ExperimentReport rep = preservation_experiment(
          cfg.ladder, 0.0, seeded_family(DecayProfile::power(1.5), cfg.seed), cfg.exec);
      return single_result(spec, tol, rep.spread, rungs);
    }
    if (name == "restricted.preservation_closed_form") {
      const cplx tt(2.0, 1.0);
      const ExperimentReport rep = preservation_experiment(
          cfg.ladder, 1.0, swap_family(tt, DecayProfile::geometric(0.5), cfg.seed), cfg.exec);
      double worst = 0.0;
      for (const auto& r : rep.per_rung)
        worst = std::max(worst, r.skipped ? kInf : std::abs(r.constant - std::norm(tt)));
      return single_result(spec, tol, worst, rungs);
    }
  } catch (const Error&) {
    return single_result(spec, tol, kInf, rungs);
  }
  throw Error(ErrorKind::config_error, "no runner for check " + name);
}

}  // namespace

const char* to_string(SuiteId id) noexcept {
  switch (id) {
    case SuiteId::atlas: return "atlas";
    case SuiteId::bundles: return "bundles";
    case SuiteId::restricted: return "restricted";
    case SuiteId::all: return "all";
  }
  return "all";
}

SuiteId suite_from_string(const std::string& name) {
  for (SuiteId id : {SuiteId::atlas, SuiteId::bundles, SuiteId::restricted, SuiteId::all})
    if (name == to_string(id)) return id;
  throw Error(ErrorKind::config_error, "unknown suite '" + name + "'");
}

void SuiteConfig::validate() const {
  if (trials < 1) throw Error(ErrorKind::config_error, "trials must be >= 1");
  if (dims.empty()) throw Error(ErrorKind::config_error, "at least one dimension is required");
  for (Index d : dims)
    if (d < 2) throw Error(ErrorKind::config_error, "dims must be >= 2");
  for (const auto& [key, value] : tolerances) {
    const bool known = std::any_of(std::begin(kRegistry), std::end(kRegistry),
                                   [&](const CheckSpec& s) { return key == s.tolerance_key; });
    if (!known) throw Error(ErrorKind::config_error, "unknown tolerance '" + key + "'");
    if (!(value > 0.0)) throw Error(ErrorKind::config_error, "tolerance '" + key + "' must be > 0");
  }
  if (ladder.empty()) throw Error(ErrorKind::config_error, "ladder must not be empty");
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    if (ladder[i] < 1) throw Error(ErrorKind::config_error, "ladder dims must be >= 1");
    if (i > 0 && ladder[i] <= ladder[i - 1])
      throw Error(ErrorKind::config_error, "ladder dims must be strictly increasing");
  }
}

std::span<const CheckSpec> check_registry() { return kRegistry; }

std::vector<CheckResult> run_suite(const SuiteConfig& cfg) {
  cfg.validate();
  std::vector<CheckResult> results;
  for (const CheckSpec& spec : kRegistry)
    if (cfg.suite == SuiteId::all || spec.suite == cfg.suite)
      results.push_back(run_check(cfg, spec));
  return results;
}

}  // namespace grassmann
