#include <cmath>

#include "grassmann/atlas.hpp"
#include "grassmann/oracles.hpp"
#include "grassmann/random.hpp"
#include "helpers.hpp"

using namespace grassmann;
using test::col2;
using test::scalar;
using test::span;

namespace {

const cplx kT(2.0, 1.0);

ChartId coordinate_chart() { return ChartId(span(col2(1, 0)), span(col2(0, 1))); }
ChartId swapped_chart() { return ChartId(span(col2(0, 1)), span(col2(1, 0))); }

ChartId random_chart(Index n, Index k, Rng& rng) {
  for (;;) {
    try {
      return ChartId(span(gaussian_matrix(n, k, rng)), span(gaussian_matrix(n, n - k, rng)),
                     ChartFlavor::general, 1e-3);
    } catch (const Error&) {
    }
  }
}

}  // namespace

TEST_CASE("subspaces") {
  const Subspace s = span(col2(1, 1));
  CHECK(s.dim() == 1);
  CHECK((s.projector() - 0.5 * Mat::Ones(2, 2)).norm() < 1e-15);
  CHECK(same_subspace(s, span(col2(cplx(0, 3), cplx(0, 3)))));
  CHECK_FALSE(same_subspace(s, span(col2(1, 0))));
  CHECK_KIND(Subspace::from_orthonormal(col2(1, 1)), "InvalidArgument");
}

TEST_CASE("chart construction") {
  CHECK_KIND(ChartId(span(col2(1, 0)), span(col2(1, 0))), "SplitFailure");
  CHECK_KIND(ChartId(span(col2(1, 0)), span(col2(1, 1)), ChartFlavor::hilbert), "InvalidArgument");
  const ChartId h = ChartId::hilbert(span(col2(1, 1)));
  CHECK(h.flavor() == ChartFlavor::hilbert);
  CHECK(h.split_conditioning() == doctest::Approx(1.0));
  CHECK(same_chart(h, ChartId(span(col2(1, 1)), span(col2(1, -1)))));
}

TEST_CASE("chart domain") {
  const ChartId c = coordinate_chart();
  SUBCASE("H = F") {
    const auto d = in_chart_domain(c.f(), c);
    CHECK(d.inside);
    CHECK(d.conditioning == doctest::Approx(1.0));
  }
  SUBCASE("H = G") {
    const auto d = in_chart_domain(c.g(), c);
    CHECK_FALSE(d.inside);
    CHECK_KIND(chart_forward(c.g(), c), "ChartDomainViolation");
  }
  SUBCASE("H = span(e1 + 3 e2)") {
    // The unit vector (1, 3)/√10 projects to e1/√10 along e2.
    const auto d = in_chart_domain(span(col2(1, 3)), c);
    CHECK(d.inside);
    CHECK(d.conditioning == doctest::Approx(1.0 / std::sqrt(10.0)).epsilon(1e-14));
  }
  SUBCASE("dimension mismatch") {
    CHECK_KIND(in_chart_domain(span(Mat::Identity(3, 1)), c), "DimensionMismatch");
  }
}

TEST_CASE("chart coordinates in C^2") {
  const ChartId c = coordinate_chart();
  CHECK(chart_forward(c.f(), c).A.norm() < 1e-15);
  const Mat a = chart_forward(span(col2(1, 3)), c).A;
  CHECK(std::abs(a(0, 0) - 3.0) < 1e-14);

  SUBCASE("hilbert chart at W = span(e1 + t e2)") {
    const ChartId v = ChartId::hilbert(span(col2(1, 0)));
    const Subspace w = span(col2(1, kT));
    // P_W = (1/(1+|t|²)) [[1, conj t], [t, |t|²]]
    const double s = 1.0 + std::norm(kT);
    Mat pw(2, 2);
    pw << 1.0, std::conj(kT), kT, std::norm(kT);
    pw /= s;
    CHECK((w.projector() - pw).norm() < 1e-15);
    // P_V⊥ P_W P_V = t/s on e1, P_V P_W P_V = 1/s, so A = t.
    CHECK(std::abs(pw(1, 0) / pw(0, 0) - kT) < 1e-15);
    CHECK(std::abs(chart_forward(w, v).A(0, 0) - kT) < 1e-14);
    CHECK(std::abs(hilbert_chart_coordinates(w, v)(0, 0) - kT) < 1e-14);
  }
}

TEST_CASE("chart inverse") {
  const ChartId c = coordinate_chart();
  CHECK(same_subspace(chart_inverse(ChartPoint(c, Mat::Zero(1, 1))), c.f()));
  CHECK(same_subspace(chart_inverse(ChartPoint(c, scalar(3))), span(col2(1, 3))));
  CHECK_KIND(ChartPoint(c, Mat::Zero(2, 1)), "DimensionMismatch");
}

TEST_CASE("roundtrips on seeded points") {
  Rng rng(17);
  for (Index n : {4, 8, 16}) {
    for (int trial = 0; trial < 100; ++trial) {
      const Index k = 1 + static_cast<Index>(rng() % static_cast<std::uint64_t>(n - 1));
      const ChartId c = random_chart(n, k, rng);
      const Mat a = gaussian_matrix(n - k, k, rng) / std::sqrt(double(n));
      const Mat back = chart_forward(chart_inverse(ChartPoint(c, a)), c).A;
      CHECK((back - a).norm() <= 1e-10 * (1 + a.norm()));
    }
  }
}

TEST_CASE("base transitions") {
  SUBCASE("target = source") {
    Rng rng(2);
    const ChartId c = random_chart(6, 2, rng);
    const Mat a = gaussian_matrix(4, 2, rng) / 3.0;
    CHECK((transition_base(ChartPoint(c, a), c).A - a).norm() < 1e-12);
  }
  SUBCASE("swap of the coordinate axes inverts t") {
    const ChartPoint pt(coordinate_chart(), scalar(kT));
    const Mat a = transition_base(pt, swapped_chart()).A;
    CHECK(std::abs(a(0, 0) - 1.0 / kT) < 1e-15);
    CHECK((oracle::transition_via_graph(pt, swapped_chart()) - a).norm() < 1e-14);
  }
  SUBCASE("leaving the target domain") {
    const ChartPoint pt(coordinate_chart(), scalar(0));
    CHECK_KIND(transition_base(pt, swapped_chart()), "ChartDomainViolation");
  }
  SUBCASE("cocycle on seeded triples in C^8") {
    Rng rng(23);
    int tested = 0;
    while (tested < 50) {
      const ChartId a = random_chart(8, 3, rng);
      const ChartPoint pt(a, gaussian_matrix(5, 3, rng) / std::sqrt(8.0));
      const Subspace h = chart_inverse(pt);
      const ChartId b = random_chart(8, 3, rng);
      const ChartId c = random_chart(8, 3, rng);
      if (in_chart_domain(h, b).conditioning < 1e-3 || in_chart_domain(h, c).conditioning < 1e-3)
        continue;
      const Mat two = transition_base(transition_base(pt, b), c).A;
      const Mat one = transition_base(pt, c).A;
      CHECK((two - one).norm() <= 1e-9 * (1 + one.norm()));
      ++tested;
    }
  }
}

TEST_CASE("hilbert specialization on seeded pairs") {
  Rng rng(31);
  int tested = 0;
  while (tested < 100) {
    const ChartId v = ChartId::hilbert(span(gaussian_matrix(8, 3, rng)));
    const Subspace w = span(gaussian_matrix(8, 3, rng));
    if (in_chart_domain(w, v).conditioning < 1e-3) continue;
    const Mat a = chart_forward(w, v).A;
    CHECK((hilbert_chart_coordinates(w, v) - a).norm() <= 1e-11 * (1 + a.norm()));
    ++tested;
  }
}

TEST_CASE("near-boundary points") {
  const ChartId v = ChartId::hilbert(span(col2(1, 0)));
  const Subspace h = chart_inverse(ChartPoint(v, scalar(1e6)));
  const auto d = in_chart_domain(h, v);
  CHECK(d.inside);
  CHECK(d.conditioning == doctest::Approx(1.0 / std::sqrt(1.0 + 1e12)).epsilon(1e-6));
  CHECK_KIND(chart_forward(h, v, 1e-4), "ChartDomainViolation");
  CHECK(std::abs(chart_forward(h, v).A(0, 0) - 1e6) < 1e-4);
}
