#include <cmath>

#include "grassmann/random.hpp"
#include "grassmann/restricted.hpp"
#include "helpers.hpp"

using namespace grassmann;
using test::span;

namespace {

Mat columns(const PolarizedModel& m, std::initializer_list<Index> plus,
            std::initializer_list<Index> minus) {
  Mat b = Mat::Zero(m.ambient_dim(), static_cast<Index>(plus.size() + minus.size()));
  Index c = 0;
  for (Index j : plus) b(m.plus_index(j), c++) = 1.0;
  for (Index j : minus) b(m.minus_index(j), c++) = 1.0;
  return b;
}

// Each level of a graph of K e_j = σ_j φ_j e_{-j} contributes a rank-two block
// to P_W − P_+ with eigenvalues ±σ_j/√(1+σ_j²).
double graph_trace_norm(const DecayProfile& profile, Index levels) {
  double sum = 0.0;
  for (Index j = 1; j <= levels; ++j) {
    const double s = profile.value(j);
    sum += 2.0 * s / std::sqrt(1.0 + s * s);
  }
  return sum;
}

}  // namespace

TEST_CASE("polarized model layout") {
  const PolarizedModel m(3, 3);
  CHECK(m.plus_index(1) == 0);
  CHECK(m.minus_index(1) == 1);
  CHECK(m.plus_index(3) == 4);
  CHECK((m.p_plus() + m.p_minus() - Mat::Identity(6, 6)).norm() == 0.0);
  CHECK_KIND(m.plus_index(4), "InvalidArgument");
  const PolarizedModel big(5, 5);
  CHECK(embeds_exactly(m.p_plus(), big.p_plus()));
}

TEST_CASE("membership numbers") {
  const PolarizedModel m(3, 3);
  SUBCASE("W = H+") {
    const auto r = is_restricted_point(m.plus_space(), m, 1.0);
    CHECK(r.diff_norm == 0.0);
    CHECK(r.virtual_dim == 0);
    CHECK(r.fredholm_gap == doctest::Approx(1.0));
  }
  SUBCASE("swap e1 for e-1") {
    const auto r = is_restricted_point(span(columns(m, {2, 3}, {1})), m, 1.0);
    CHECK(r.diff_norm == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(r.virtual_dim == 0);
    CHECK(is_restricted_point(span(columns(m, {2, 3}, {1})), m, 0.0).diff_norm ==
          doctest::Approx(1.0));
  }
  SUBCASE("add e-1") {
    const auto r = is_restricted_point(span(columns(m, {1, 2, 3}, {1})), m, 1.0);
    CHECK(r.diff_norm == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.virtual_dim == 1);
  }
  SUBCASE("bad index") {
    CHECK_KIND(is_restricted_point(m.plus_space(), m, 0.5), "InvalidArgument");
  }
}

TEST_CASE("virtual dimension") {
  const PolarizedModel m(3, 3);
  CHECK(virtual_dimension(m.plus_space(), m) == 0);
  CHECK(virtual_dimension(span(columns(m, {1, 2, 3}, {1})), m) == 1);
  CHECK(virtual_dimension_by_rank(span(columns(m, {1, 2, 3}, {1})), m) == 1);

  // H+ minus e1, rotated slightly towards the minus half.
  Rng rng(12);
  Mat b = columns(m, {2, 3}, {});
  b += 1e-3 * gaussian_matrix(6, 2, rng);
  const Subspace w = span(b);
  CHECK(virtual_dimension(w, m) == -1);
  CHECK(virtual_dimension_by_rank(w, m) == -1);
}

TEST_CASE("generated restricted points") {
  const PolarizedModel m(6, 6);
  SUBCASE("zero profile is H+") {
    const auto r = gen_restricted_point(m, 1.0, DecayProfile::zero(), 0, 1);
    CHECK(same_subspace(r.W, m.plus_space()));
    CHECK(r.diff_norm == 0.0);
  }
  SUBCASE("deterministic") {
    const auto a = gen_restricted_point(m, 1.0, DecayProfile::geometric(0.5), 0, 3);
    const auto b = gen_restricted_point(m, 1.0, DecayProfile::geometric(0.5), 0, 3);
    CHECK(a.W.basis() == b.W.basis());
  }
  SUBCASE("trace norm matches the level-wise closed form") {
    const DecayProfile g = DecayProfile::geometric(0.5);
    const auto r = gen_restricted_point(m, 1.0, g, 0, 4);
    CHECK(r.diff_norm == doctest::Approx(graph_trace_norm(g, 6)).epsilon(1e-13));
    CHECK(r.virtual_dim == 0);
  }
  SUBCASE("virtual dimension shifts") {
    for (int v : {-2, -1, 1, 2}) {
      const auto r = gen_restricted_point(m, 2.0, DecayProfile::power(2.0), v, 5);
      CHECK(r.virtual_dim == v);
      CHECK(virtual_dimension_by_rank(r.W, m) == v);
      CHECK(r.fredholm_gap > 1e-3);
    }
    CHECK_KIND(gen_restricted_point(m, 1.0, DecayProfile::zero(), 7, 1), "InvalidArgument");
  }
  SUBCASE("bad profile") {
    CHECK_KIND(gen_restricted_point(m, 1.0, DecayProfile::geometric(2.0), 0, 1), "BadProfile");
  }
}

TEST_CASE("truncation ladder") {
  const DecayProfile g = DecayProfile::geometric(0.5);
  const auto ladder = make_ladder({{8, 8}, {16, 16}, {32, 32}}, 1.0, g, 0, 9);
  REQUIRE(ladder.instances.size() == 3);
  for (std::size_t i = 0; i + 1 < 3; ++i)
    CHECK(embeds_exactly(ladder.instances[i].W.basis(), ladder.instances[i + 1].W.basis()));
  const double bound = 2.0 * std::pow(0.5, 8);
  for (const auto& a : ladder.instances)
    for (const auto& b : ladder.instances) CHECK(std::abs(a.diff_norm - b.diff_norm) <= bound);
  CHECK(ladder.instances[2].diff_norm == doctest::Approx(graph_trace_norm(g, 32)).epsilon(1e-13));

  const Mat mu8 = gen_ladder_covector(8, 8, g, 1);
  const Mat mu16 = gen_ladder_covector(16, 16, g, 1);
  CHECK(embeds_exactly(mu8, mu16));
  CHECK(std::abs(std::abs(mu16(2, 3)) - g.value(2) * g.value(3)) < 1e-16);
}

TEST_CASE("precotangent classes") {
  const ChartPoint pt(ChartId::hilbert(span(Mat::Identity(4, 2))), Mat::Zero(2, 2));
  const Mat mu = Mat::Ones(2, 2);
  const DecayProfile d = DecayProfile::geometric(0.5);
  CHECK(precotangent_class(kBoundedModel) == ClassTag::trace_class_emulated);
  CHECK(precotangent_class(1.0) == ClassTag::compact_emulated);
  CHECK(precotangent_class(2.0) == ClassTag::unrestricted);
  CHECK(make_precotangent(pt, mu, 1.0, d).tag == ClassTag::compact_emulated);
  CHECK_KIND(precotangent_class(0.0), "PredualUnavailable");
  CHECK_KIND(make_precotangent(pt, mu, 0.0, d), "PredualUnavailable");
}

TEST_CASE("preservation experiments") {
  const std::vector<Index> dims{16, 32, 64, 128};
  const DecayProfile g = DecayProfile::geometric(0.5);

  SUBCASE("identity transition") {
    const auto rep = preservation_experiment(dims, 1.0, identity_family(g, 1));
    for (const auto& r : rep.per_rung) CHECK(r.constant == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.pass);
  }
  SUBCASE("swap family reproduces |t|^2") {
    const cplx t(2.0, 1.0);
    const auto rep = preservation_experiment(dims, 1.0, swap_family(t, g, 1));
    for (const auto& r : rep.per_rung) {
      CHECK_FALSE(r.skipped);
      CHECK(std::abs(r.constant - std::norm(t)) <= 1e-8);
    }
  }
  SUBCASE("seeded charts stabilize") {
    const auto rep = preservation_experiment(dims, 1.0, seeded_family(g, 42));
    CHECK(rep.spread <= kStabilizationSpread);
    CHECK(rep.pass);
    const auto j = to_json(rep);
    CHECK(j.at("per_rung").size() == 4);
    CHECK(j.at("pass").get<bool>());
  }
  SUBCASE("compact class in operator norm") {
    const auto rep = preservation_experiment(dims, 0.0, seeded_family(DecayProfile::power(1.5), 42));
    CHECK(rep.pass);
    for (const auto& r : rep.per_rung) CHECK(r.tail > 0.0);
    CHECK(to_json(rep).at("per_rung")[0].contains("tail"));
  }
  SUBCASE("serial and OpenMP agree exactly") {
    const auto a = preservation_experiment(dims, 1.0, seeded_family(g, 3), ExecPolicy::serial);
    const auto b = preservation_experiment(dims, 1.0, seeded_family(g, 3), ExecPolicy::openmp);
    CHECK(to_json(a).dump() == to_json(b).dump());
  }
  SUBCASE("out-of-domain rungs are skipped") {
    // t = 0 puts the base point at H+, outside the swapped chart's domain.
    const auto rep = preservation_experiment(dims, 1.0, swap_family(0.0, g, 1));
    for (const auto& r : rep.per_rung) CHECK(r.skipped);
    CHECK_FALSE(rep.pass);
    CHECK(to_json(rep).at("per_rung")[0].at("skipped").get<bool>());
  }
}
