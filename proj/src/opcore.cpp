#include "grassmann/opcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "grassmann/error.hpp"

namespace grassmann {

Operator compose(const Operator& outer, const Operator& inner) {
  if (outer.domain && inner.codomain && *outer.domain != *inner.codomain)
    throw Error(ErrorKind::label_mismatch,
                "cannot compose " + *outer.domain + " <- " + *inner.codomain);
  if (outer.m.cols() != inner.m.rows())
    throw Error(ErrorKind::dimension_mismatch, "compose: inner dimensions differ");
  return Operator{outer.m * inner.m, inner.domain, outer.codomain};
}

RVec singular_values(const Mat& t) {
  if (t.size() == 0) return RVec(0);
  // BDCSVD falls back to one-sided Jacobi below its block size, so small
  // singular values keep full relative accuracy.
  Eigen::BDCSVD<Mat> svd(t);
  return svd.singularValues();
}

double schatten_value(const RVec& sigma, double p) {
  if (!(p >= 1.0) || !std::isfinite(p))
    throw Error(ErrorKind::invalid_argument, "Schatten index must be finite and >= 1");
  if (sigma.size() == 0) return 0.0;
  const double top = sigma.maxCoeff();
  if (top == 0.0) return 0.0;
  if (p == 1.0) return sigma.sum();
  // Scale by σ_max so large p does not overflow.
  double acc = 0.0;
  for (Index k = 0; k < sigma.size(); ++k) acc += std::pow(sigma[k] / top, p);
  return top * std::pow(acc, 1.0 / p);
}

SchattenReport schatten_norm(const Mat& t, double p) {
  SchattenReport report;
  report.p = p;
  report.singular_values = singular_values(t);
  report.value = schatten_value(report.singular_values, p);
  return report;
}

double operator_norm(const Mat& t) {
  const RVec s = singular_values(t);
  return s.size() == 0 ? 0.0 : s[0];
}

bool spectral_norm_at_most(const Mat& m, double tol) {
  const double fro = m.norm();
  if (fro <= tol) return true;
  if (m.size() == 0) return true;
  return operator_norm(m) <= tol;
}

ObliqueProjections oblique_projections(const Mat& basis_f, const Mat& basis_g,
                                       double tol_split) {
  const Index n = basis_f.rows();
  if (basis_g.rows() != n || basis_f.cols() + basis_g.cols() != n)
    throw Error(ErrorKind::split_failure,
                "bases of F and G do not have complementary dimensions");
  Mat joint(n, n);
  joint << basis_f, basis_g;
  const RVec sigma = singular_values(joint);
  const double cond = sigma.size() == 0 ? 1.0 : sigma[n - 1] / sigma[0];
  if (!(cond > tol_split))
    throw Error(ErrorKind::split_failure, "[B_F | B_G] is numerically singular");

  const Index k = basis_f.cols();
  Eigen::PartialPivLU<Mat> lu(joint);
  const Mat coeffs = lu.solve(Mat::Identity(n, n));  // rows: F-part, G-part
  ObliqueProjections out;
  out.onto_f = basis_f * coeffs.topRows(k);
  out.onto_g = basis_g * coeffs.bottomRows(n - k);
  out.conditioning = cond;
  return out;
}

Mat orthonormalize(const Mat& columns) {
  const Index n = columns.rows();
  const Index k = columns.cols();
  if (k > n) throw Error(ErrorKind::invalid_argument, "more columns than rows");
  Eigen::HouseholderQR<Mat> qr(columns);
  const Mat& r = qr.matrixQR();
  double top = 0.0;
  double bottom = std::numeric_limits<double>::infinity();
  for (Index j = 0; j < k; ++j) {
    top = std::max(top, std::abs(r(j, j)));
    bottom = std::min(bottom, std::abs(r(j, j)));
  }
  if (k > 0 && !(bottom > 1e-13 * std::max(top, 1.0)))
    throw Error(ErrorKind::invalid_argument, "columns are numerically dependent");
  // Fix the phases so R has a positive diagonal; a single column then comes
  // back as v/|v| and coordinates follow the given spanning vectors.
  Mat q = qr.householderQ() * Mat::Identity(n, k);
  for (Index j = 0; j < k; ++j) q.col(j) *= r(j, j) / std::abs(r(j, j));
  return q;
}

Mat orthogonal_complement(const Mat& basis) {
  const Index n = basis.rows();
  const Index k = basis.cols();
  if (k == 0) return Mat::Identity(n, n);
  Eigen::HouseholderQR<Mat> qr(basis);
  Mat full = qr.householderQ();
  return full.rightCols(n - k);
}

Mat right_solve(const Mat& lhs, const Mat& divisor) {
  if (divisor.rows() == 0) return Mat::Zero(lhs.rows(), 0);
  Eigen::PartialPivLU<Mat> lu(divisor.transpose());
  return lu.solve(lhs.transpose()).transpose();
}

double DecayProfile::value(Index k) const {
  switch (kind) {
    case Kind::zero: return 0.0;
    case Kind::geometric: return std::pow(param, static_cast<double>(k));
    case Kind::power: return std::pow(static_cast<double>(k + 1), -param);
  }
  return 0.0;
}

void DecayProfile::validate(bool allow_zero) const {
  switch (kind) {
    case Kind::zero:
      if (!allow_zero) throw Error(ErrorKind::bad_profile, "zero profile not allowed here");
      return;
    case Kind::geometric:
      if (!(param > 0.0 && param < 1.0))
        throw Error(ErrorKind::bad_profile, "geometric ratio must lie in (0, 1)");
      return;
    case Kind::power:
      if (!(param > 1.0) || !std::isfinite(param))
        throw Error(ErrorKind::bad_profile, "power exponent must exceed 1");
      return;
  }
}

Mat gen_decay_operator(Index rows, Index cols, const DecayProfile& profile,
                       std::uint64_t seed) {
  profile.validate(false);
  if (rows < 0 || cols < 0) throw Error(ErrorKind::invalid_argument, "negative size");
  Rng rng(seed);
  const Mat u = haar_unitary(rows, rng);
  const Mat v = haar_unitary(cols, rng);
  const Index r = std::min(rows, cols);
  Mat out = Mat::Zero(rows, cols);
  for (Index k = 0; k < r; ++k)
    out += profile.value(k) * u.col(k) * v.col(k).adjoint();
  return out;
}

bool embeds_exactly(const Mat& small, const Mat& large) {
  if (small.rows() > large.rows() || small.cols() > large.cols()) return false;
  for (Index j = 0; j < small.cols(); ++j)
    for (Index i = 0; i < small.rows(); ++i)
      if (small(i, j) != large(i, j)) return false;
  return true;
}

SingularTail compactness_tail(std::span<const Mat> ladder, Index cutoff) {
  SingularTail out;
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    const Mat& t = ladder[i];
    if (i > 0) {
      const Mat& prev = ladder[i - 1];
      if (t.rows() <= prev.rows() || !embeds_exactly(prev, t))
        throw Error(ErrorKind::ladder_mismatch,
                    "rung " + std::to_string(i) + " does not extend the previous one");
    }
    const RVec sigma = singular_values(t);
    double tail = 0.0;
    for (Index k = cutoff; k < sigma.size(); ++k) tail += sigma[k];
    out.dims.push_back(t.rows());
    out.tail_norms.push_back(tail);
  }
  return out;
}

}  // namespace grassmann
