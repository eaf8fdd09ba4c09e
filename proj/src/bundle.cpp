#include "grassmann/bundle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "grassmann/error.hpp"
#include "grassmann/random.hpp"

namespace grassmann {

namespace {

void require_same_point(const ChartPoint& a, const ChartPoint& b, const char* where) {
  if (!same_point(a, b))
    throw Error(ErrorKind::chart_mismatch, std::string(where) + ": different chart points");
}

Mat inverse_by_solve(const Mat& m) {
  if (m.rows() == 0) return Mat(0, 0);
  return Eigen::PartialPivLU<Mat>(m).solve(Mat::Identity(m.rows(), m.cols()));
}

// Two product-rule pieces of the derivative; `image` is the base point the
// map lands on (ψ(A), or the known source point for a reversed map).
std::vector<FiberFactor> factors_from_jet(const TransitionJet& jet, const Mat& image) {
  const Mat s = inverse_by_solve(jet.d_f);
  return {FiberFactor{s, jet.n_g}, FiberFactor{s, -(image * jet.n_f)}};
}

}  // namespace

TangentVector::TangentVector(ChartPoint p, Mat x) : at(std::move(p)), X(std::move(x)) {
  if (X.rows() != at.A.rows() || X.cols() != at.A.cols())
    throw Error(ErrorKind::dimension_mismatch, "tangent vector shape differs from A");
}

Covector::Covector(ChartPoint p, Mat m, ClassTag t, std::optional<DecayProfile> d)
    : at(std::move(p)), mu(std::move(m)), tag(t), decay(std::move(d)) {
  if (mu.rows() != at.A.cols() || mu.cols() != at.A.rows())
    throw Error(ErrorKind::dimension_mismatch, "covector shape must be the transpose of A");
  if (tag != ClassTag::unrestricted && !decay)
    throw Error(ErrorKind::invalid_argument, "emulated class tags need decay metadata");
}

TensorCovector::TensorCovector(ChartPoint p, std::vector<TensorTerm> t)
    : at(std::move(p)), terms(std::move(t)) {
  const Index k = at.chart.f().dim();
  const Index m = at.chart.g().dim();
  for (const auto& term : terms)
    if (term.x.size() != k || term.y.size() != m)
      throw Error(ErrorKind::dimension_mismatch, "tensor term sizes do not match the chart");
}

Mat apply_factors(std::span<const FiberFactor> factors, const Mat& x) {
  if (factors.empty()) throw Error(ErrorKind::invalid_argument, "empty factor list");
  Mat out = factors[0].T * x * factors[0].S;
  for (std::size_t j = 1; j < factors.size(); ++j) out += factors[j].T * x * factors[j].S;
  return out;
}

TangentTransition tangent_factors(const ChartPoint& pt, const ChartId& target,
                                  double tol_domain) {
  const TransitionJet jet = transition_jet(pt, target, tol_domain);
  return TangentTransition{ChartPoint(target, jet.image), factors_from_jet(jet, jet.image)};
}

std::vector<FiberFactor> cotangent_factors(const ChartPoint& pt, const ChartId& target,
                                           double tol_domain) {
  const ChartPoint image = transition_base(pt, target, tol_domain);
  const TransitionJet back = transition_jet(image, pt.chart, tol_domain);
  return factors_from_jet(back, pt.A);
}

TangentVector transition_tangent(const TangentVector& v, const ChartId& target,
                                 double tol_domain) {
  const TransitionJet jet = transition_jet(v.at, target, tol_domain);
  const Mat left = jet.n_g - jet.image * jet.n_f;
  return TangentVector(ChartPoint(target, jet.image), right_solve(left * v.X, jet.d_f));
}

Covector transition_cotangent(const Covector& c, const ChartId& target, double tol_domain) {
  const ChartPoint image = transition_base(c.at, target, tol_domain);
  const TransitionJet back = transition_jet(image, c.at.chart, tol_domain);
  // Reversed tangent map: X' ↦ (n_g − A·n_f)·X'·d_f⁻¹, transposed onto μ.
  const Mat right = back.n_g - c.at.A * back.n_f;
  Mat mu_prime;
  if (back.d_f.rows() == 0)
    mu_prime = Mat::Zero(0, right.cols());
  else
    mu_prime = Eigen::PartialPivLU<Mat>(back.d_f).solve(c.mu * right);
  return Covector(image, std::move(mu_prime), c.tag, c.decay);
}

Mat hilbert_cotangent_formula(const Covector& c, const ChartId& target, double tol_domain) {
  const ChartId& source = c.at.chart;
  if (source.flavor() != ChartFlavor::hilbert || target.flavor() != ChartFlavor::hilbert)
    throw Error(ErrorKind::invalid_argument, "projector formula needs hilbert charts");
  const ChartPoint image = transition_base(c.at, target, tol_domain);

  const Index n = source.ambient_dim();
  const Mat& bv = source.f().basis();
  const Mat& bv_perp = source.g().basis();
  const Mat& bw = target.f().basis();
  const Mat& bw_perp = target.g().basis();
  const Mat& pv = source.f().projector();
  const Mat& pv_perp = source.g().projector();

  // 1_W + A' as an operator on ℂⁿ that acts on W and kills W^⊥.
  const Mat graph_op = target.f().projector() + bw_perp * image.A * bw.adjoint();
  // P_V(P_W + A') restricted to W, in W → V coordinates.
  const Mat d = bv.adjoint() * graph_op * bw;
  const RVec sd = singular_values(d);
  if (sd.size() > 0 && !(sd[sd.size() - 1] > tol_domain))
    throw Error(ErrorKind::chart_domain_violation, "P_V(P_W + A') is not invertible");
  Eigen::PartialPivLU<Mat> lu(d);
  auto d_inverse = [&](const Mat& x) -> Mat { return bw * lu.solve(bv.adjoint() * x); };

  const Mat mu_full = bv * c.mu * bv_perp.adjoint();
  const Mat right = pv_perp * (Mat::Identity(n, n) - graph_op * d_inverse(pv));
  const Mat mu_prime_full = d_inverse(mu_full * right);
  return bw.adjoint() * mu_prime_full * bw_perp;
}

cplx pair_trace(const Covector& c, const TangentVector& v) {
  require_same_point(c.at, v.at, "pair_trace");
  const Index k = c.mu.rows();
  const Index m = c.mu.cols();
  cplx over_f = 0.0;  // Σ_a (μX)_aa
  for (Index a = 0; a < k; ++a)
    for (Index b = 0; b < m; ++b) over_f += c.mu(a, b) * v.X(b, a);
  cplx over_g = 0.0;  // Σ_b (Xμ)_bb
  for (Index b = 0; b < m; ++b)
    for (Index a = 0; a < k; ++a) over_g += v.X(b, a) * c.mu(a, b);
  const double scale = 1.0 + c.mu.norm() * v.X.norm();
  if (std::abs(over_f - over_g) > 1e-12 * scale * static_cast<double>(k + m))
    throw std::logic_error("pair_trace: traces over F and G disagree");
  return over_f;
}

cplx pair_tensor(const TangentVector& v, const TensorCovector& tc) {
  require_same_point(v.at, tc.at, "pair_tensor");
  cplx total = 0.0;
  for (const auto& term : tc.terms) total += (v.X * term.x).cwiseProduct(term.y).sum();
  return total;
}

Covector tensor_to_operator(const TensorCovector& tc) {
  Mat mu = Mat::Zero(tc.at.A.cols(), tc.at.A.rows());
  for (const auto& term : tc.terms) mu += term.x * term.y.transpose();
  return Covector(tc.at, std::move(mu));
}

TensorCovector operator_to_tensor(const Covector& c) {
  std::vector<TensorTerm> terms;
  if (c.mu.size() == 0) return TensorCovector(c.at, std::move(terms));
  Eigen::BDCSVD<Mat> svd(c.mu, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVec& sigma = svd.singularValues();
  const double cutoff = static_cast<double>(std::max(c.mu.rows(), c.mu.cols())) *
                        std::numeric_limits<double>::epsilon() * sigma[0];
  for (Index i = 0; i < sigma.size(); ++i) {
    if (!(sigma[i] > cutoff)) break;
    terms.push_back(TensorTerm{sigma[i] * svd.matrixU().col(i), svd.matrixV().col(i).conjugate()});
  }
  return TensorCovector(c.at, std::move(terms));
}

TensorCovector pushforward_tensor(const TensorCovector& tc,
                                  std::span<const FiberFactor> factors,
                                  const ChartId& target, double tol_domain) {
  const Index k = tc.at.chart.f().dim();
  const Index m = tc.at.chart.g().dim();
  if (factors.empty()) throw Error(ErrorKind::factor_mismatch, "no factors given");
  for (const auto& f : factors)
    if (f.S.rows() != k || f.S.cols() != k || f.T.rows() != m || f.T.cols() != m)
      throw Error(ErrorKind::factor_mismatch, "factor shapes do not match the charts");

  const ChartPoint image = transition_base(tc.at, target, tol_domain);
  const std::vector<FiberFactor> expected = cotangent_factors(tc.at, target, tol_domain);

  // Elementary probes when the fiber is small, a fixed random set otherwise.
  std::vector<Mat> probes;
  if (m * k <= 64) {
    for (Index a = 0; a < m; ++a)
      for (Index b = 0; b < k; ++b) {
        Mat e = Mat::Zero(m, k);
        e(a, b) = 1.0;
        probes.push_back(std::move(e));
      }
  } else {
    Rng rng(0x70726f6265ULL);
    for (int i = 0; i < 8; ++i) probes.push_back(gaussian_matrix(m, k, rng));
  }
  for (const Mat& probe : probes) {
    const Mat want = apply_factors(expected, probe);
    const Mat got = apply_factors(factors, probe);
    if ((want - got).norm() > 1e-9 * (1.0 + want.norm()))
      throw Error(ErrorKind::factor_mismatch,
                  "factors do not reproduce the reversed tangent map");
  }

  std::vector<TensorTerm> terms;
  terms.reserve(tc.terms.size() * factors.size());
  for (const auto& term : tc.terms)
    for (const auto& f : factors)
      terms.push_back(TensorTerm{f.S * term.x, f.T.transpose() * term.y});
  return TensorCovector(image, std::move(terms));
}

}  // namespace grassmann
