#include <cmath>

#include "grassmann/bundle.hpp"
#include "grassmann/oracles.hpp"
#include "grassmann/random.hpp"
#include "helpers.hpp"

using namespace grassmann;
using test::col2;
using test::scalar;
using test::span;

namespace {

const cplx kT(2.0, 1.0);

ChartId coordinate_chart(ChartFlavor fl = ChartFlavor::general) {
  return ChartId(span(col2(1, 0)), span(col2(0, 1)), fl);
}
ChartId swapped_chart(ChartFlavor fl = ChartFlavor::general) {
  return ChartId(span(col2(0, 1)), span(col2(1, 0)), fl);
}

struct Instance {
  ChartPoint pt;
  ChartId target;
};

ChartId random_chart(Index n, Index k, Rng& rng, bool hilbert) {
  for (;;) {
    const Subspace f = span(gaussian_matrix(n, k, rng));
    if (hilbert) return ChartId::hilbert(f);
    try {
      return ChartId(f, span(gaussian_matrix(n, n - k, rng)), ChartFlavor::general, 1e-3);
    } catch (const Error&) {
    }
  }
}

Instance random_instance(Index n, Index k, Rng& rng, bool hilbert = false) {
  for (;;) {
    const ChartId src = random_chart(n, k, rng, hilbert);
    ChartPoint pt(src, gaussian_matrix(n - k, k, rng) / std::sqrt(double(n)));
    const ChartId dst = random_chart(n, k, rng, hilbert);
    if (in_chart_domain(chart_inverse(pt), dst).conditioning > 1e-3) return {pt, dst};
  }
}

}  // namespace

TEST_CASE("tangent transition") {
  SUBCASE("target = source") {
    Rng rng(1);
    const auto in = random_instance(5, 2, rng);
    const Mat x = gaussian_matrix(3, 2, rng);
    const TangentVector v = transition_tangent(TangentVector(in.pt, x), in.pt.chart);
    CHECK((v.X - x).norm() < 1e-12);
    CHECK((v.at.A - in.pt.A).norm() < 1e-12);
  }
  SUBCASE("C^2 swap: derivative of 1/t") {
    const cplx x(0.3, -0.7);
    const ChartPoint pt(coordinate_chart(), scalar(kT));
    const TangentVector v = transition_tangent(TangentVector(pt, scalar(x)), swapped_chart());
    CHECK(std::abs(v.X(0, 0) - (-x / (kT * kT))) < 1e-15);
    CHECK(std::abs(v.at.A(0, 0) - 1.0 / kT) < 1e-15);
    const Mat fd = oracle::central_difference(pt, swapped_chart(), scalar(x));
    CHECK(std::abs(fd(0, 0) - v.X(0, 0)) < 1e-9);
    const Mat cs = oracle::complex_step_derivative(pt, swapped_chart(), scalar(x));
    CHECK(std::abs(cs(0, 0) - v.X(0, 0)) < 1e-15);
  }
  SUBCASE("linearity") {
    Rng rng(2);
    for (int trial = 0; trial < 20; ++trial) {
      const auto in = random_instance(6, 2, rng);
      const Mat x = gaussian_matrix(4, 2, rng);
      const Mat y = gaussian_matrix(4, 2, rng);
      const cplx a(0.4, 1.1), b(-2.0, 0.5);
      auto img = [&](const Mat& z) { return transition_tangent(TangentVector(in.pt, z), in.target).X; };
      const Mat rhs = a * img(x) + b * img(y);
      CHECK((img(a * x + b * y) - rhs).norm() <= 1e-11 * (1 + rhs.norm()));
    }
  }
  SUBCASE("agrees with the complex-step and central-difference oracles") {
    Rng rng(3);
    for (Index n : {4, 8, 16}) {
      for (int trial = 0; trial < 10; ++trial) {
        const auto in = random_instance(n, n / 2, rng);
        const Mat x = gaussian_matrix(n - n / 2, n / 2, rng);
        const Mat j = transition_tangent(TangentVector(in.pt, x), in.target).X;
        const Mat cs = oracle::complex_step_derivative(in.pt, in.target, x);
        const Mat fd = oracle::central_difference(in.pt, in.target, x);
        CHECK((j - cs).norm() <= 1e-10 * std::max(1.0, j.norm()));
        CHECK((j - fd).norm() <= 1e-6 * j.norm());
      }
    }
  }
  SUBCASE("factor form") {
    Rng rng(4);
    const auto in = random_instance(7, 3, rng);
    const Mat x = gaussian_matrix(4, 3, rng);
    const TangentTransition tt = tangent_factors(in.pt, in.target);
    CHECK(tt.factors.size() == 2);
    CHECK((apply_factors(tt.factors, x) -
           transition_tangent(TangentVector(in.pt, x), in.target).X).norm() < 1e-12);
  }
  SUBCASE("shape check") {
    CHECK_KIND(TangentVector(ChartPoint(coordinate_chart(), scalar(1)), Mat::Zero(2, 1)),
               "DimensionMismatch");
  }
}

TEST_CASE("cotangent transition") {
  SUBCASE("target = source") {
    Rng rng(5);
    const auto in = random_instance(5, 2, rng);
    const Mat mu = gaussian_matrix(2, 3, rng);
    CHECK((transition_cotangent(Covector(in.pt, mu), in.pt.chart).mu - mu).norm() < 1e-12);
  }
  SUBCASE("C^2 swap: mu' = -t^2 m") {
    const cplx m(1.5, 0.25), x(0.3, -0.7);
    const ChartPoint pt(coordinate_chart(), scalar(kT));
    const Covector c2 = transition_cotangent(Covector(pt, scalar(m)), swapped_chart());
    CHECK(std::abs(c2.mu(0, 0) - (-kT * kT * m)) < 1e-14);
    // ⟨μ', -x/t²⟩ = ⟨μ, x⟩
    CHECK(std::abs(c2.mu(0, 0) * (-x / (kT * kT)) - m * x) < 1e-14);
    // The orthogonal-projector form gives the same number on the hilbert swap.
    const ChartPoint hp(coordinate_chart(ChartFlavor::hilbert), scalar(kT));
    const Mat via_proj =
        hilbert_cotangent_formula(Covector(hp, scalar(m)), swapped_chart(ChartFlavor::hilbert));
    CHECK(std::abs(via_proj(0, 0) - (-kT * kT * m)) < 1e-14);
  }
  SUBCASE("pairing invariance") {
    Rng rng(6);
    for (Index n : {4, 8, 16}) {
      for (int trial = 0; trial < 20; ++trial) {
        const Index k = 1 + trial % (n - 1);
        const auto in = random_instance(n, k, rng);
        const Covector c(in.pt, gaussian_matrix(k, n - k, rng));
        const TangentVector v(in.pt, gaussian_matrix(n - k, k, rng));
        const cplx before = pair_trace(c, v);
        const cplx after =
            pair_trace(transition_cotangent(c, in.target), transition_tangent(v, in.target));
        CHECK(std::abs(after - before) <= 1e-9 * (1 + std::abs(before)));
      }
    }
  }
  SUBCASE("class tag and decay are carried over") {
    Rng rng(7);
    const auto in = random_instance(4, 2, rng);
    const Covector c(in.pt, gaussian_matrix(2, 2, rng), ClassTag::trace_class_emulated,
                     DecayProfile::geometric(0.5));
    const Covector c2 = transition_cotangent(c, in.target);
    CHECK(c2.tag == ClassTag::trace_class_emulated);
    CHECK(c2.decay == DecayProfile::geometric(0.5));
    CHECK_KIND(Covector(in.pt, gaussian_matrix(2, 2, rng), ClassTag::compact_emulated),
               "InvalidArgument");
  }
}

TEST_CASE("trace pairing") {
  const ChartPoint p1(coordinate_chart(), scalar(0));
  CHECK(pair_trace(Covector(p1, scalar(2)), TangentVector(p1, scalar(3))) == cplx(6));
  CHECK(pair_trace(Covector(p1, scalar(0)), TangentVector(p1, scalar(cplx(5, 2)))) == cplx(0));

  Rng rng(8);
  const ChartId c = ChartId::hilbert(span(gaussian_matrix(10, 4, rng)));
  const ChartPoint pt(c, gaussian_matrix(6, 4, rng));
  const Mat mu = gaussian_matrix(4, 6, rng);
  const Mat x = gaussian_matrix(6, 4, rng);
  CHECK(std::abs(pair_trace(Covector(pt, mu), TangentVector(pt, x)) -
                 oracle::trace_double_sum(mu, x)) < 1e-12);

  const ChartPoint other(c, gaussian_matrix(6, 4, rng));
  CHECK_KIND(pair_trace(Covector(pt, mu), TangentVector(other, x)), "ChartMismatch");
}

TEST_CASE("tensor form") {
  const ChartId c = ChartId::hilbert(span(Mat::Identity(4, 2)));
  const ChartPoint pt(c, Mat::Zero(2, 2));
  const Vec e1 = Vec::Unit(2, 0);

  SUBCASE("pairing") {
    Mat x = Mat::Identity(2, 2);
    CHECK(pair_tensor(TangentVector(pt, x), TensorCovector(pt, {{e1, e1}})) == cplx(1));
    CHECK(pair_tensor(TangentVector(pt, x), TensorCovector(pt)) == cplx(0));
  }
  SUBCASE("operator conversions") {
    const Covector op = tensor_to_operator(TensorCovector(pt, {{e1, e1}}));
    Mat e11 = Mat::Zero(2, 2);
    e11(0, 0) = 1.0;
    CHECK(op.mu == e11);
    CHECK(operator_to_tensor(Covector(pt, Mat::Zero(2, 2))).terms.empty());

    Rng rng(9);
    for (int trial = 0; trial < 10; ++trial) {
      const Mat mu = gaussian_matrix(2, 2, rng);
      const Covector cv(pt, mu);
      const TensorCovector tc = operator_to_tensor(cv);
      CHECK((tensor_to_operator(tc).mu - mu).norm() <= 1e-12 * (1 + mu.norm()));
      const TangentVector v(pt, gaussian_matrix(2, 2, rng));
      CHECK(std::abs(pair_tensor(v, tc) - pair_trace(tensor_to_operator(tc), v)) < 1e-12);
    }
  }
  SUBCASE("pushforward with trivial factors") {
    const std::vector<TensorTerm> terms{{e1, Vec::Unit(2, 1)}, {Vec::Ones(2), e1}};
    const std::vector<FiberFactor> id{{Mat::Identity(2, 2), Mat::Identity(2, 2)}};
    const TensorCovector out = pushforward_tensor(TensorCovector(pt, terms), id, c);
    REQUIRE(out.terms.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(out.terms[i].x == terms[i].x);
      CHECK(out.terms[i].y == terms[i].y);
    }
    // A single factor (S, T) with T·X·S = X: terms become (S x, Tᵀ y).
    const std::vector<FiberFactor> scaled{{2.0 * Mat::Identity(2, 2), 0.5 * Mat::Identity(2, 2)}};
    const TensorCovector s = pushforward_tensor(TensorCovector(pt, terms), scaled, c);
    CHECK((s.terms[0].x - 2.0 * terms[0].x).norm() == 0.0);
    CHECK((s.terms[0].y - 0.5 * terms[0].y).norm() == 0.0);
  }
  SUBCASE("factors that do not match the transition") {
    const std::vector<FiberFactor> wrong{{Mat::Identity(2, 2), 3.0 * Mat::Identity(2, 2)}};
    CHECK_KIND(pushforward_tensor(TensorCovector(pt, {{e1, e1}}), wrong, c), "FactorMismatch");
  }
}

TEST_CASE("tensor and operator pushforwards agree") {
  Rng rng(10);
  for (bool hilbert : {false, true}) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto in = random_instance(6, 1 + trial % 5, rng, hilbert);
      const Index k = in.pt.chart.f().dim();
      const Covector c(in.pt, gaussian_matrix(k, 6 - k, rng));
      const auto factors = cotangent_factors(in.pt, in.target);
      const Mat via_tensor =
          tensor_to_operator(pushforward_tensor(operator_to_tensor(c), factors, in.target)).mu;
      const Mat via_op = transition_cotangent(c, in.target).mu;
      CHECK((via_tensor - via_op).norm() <= 1e-10 * (1 + via_op.norm()));
      if (hilbert) {
        const Mat via_proj = hilbert_cotangent_formula(c, in.target);
        CHECK((via_proj - via_op).norm() <= 1e-10 * (1 + via_op.norm()));
      }
    }
  }
}
