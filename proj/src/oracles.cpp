#include "grassmann/oracles.hpp"

#include <cmath>
#include <utility>

#include "grassmann/error.hpp"

namespace grassmann::oracle {

namespace {

// Entries are complex numbers whose imaginary part is the complex-step
// direction, not the imaginary part of the original problem.
using StepMat = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic>;

Eigen::MatrixXd realify(const Mat& z) {
  const Index r = z.rows();
  const Index c = z.cols();
  Eigen::MatrixXd out(2 * r, 2 * c);
  out.topLeftCorner(r, c) = z.real();
  out.topRightCorner(r, c) = -z.imag();
  out.bottomLeftCorner(r, c) = z.imag();
  out.bottomRightCorner(r, c) = z.real();
  return out;
}

StepMat lift(const Eigen::MatrixXd& m) { return m.cast<std::complex<double>>(); }

// Gaussian elimination with partial pivoting on the real parts. Only
// +, −, ×, ÷ touch the entries, so the step direction propagates exactly.
StepMat solve(StepMat a, StepMat b) {
  const Index n = a.rows();
  for (Index col = 0; col < n; ++col) {
    Index pivot = col;
    for (Index r = col + 1; r < n; ++r)
      if (std::abs(a(r, col).real()) > std::abs(a(pivot, col).real())) pivot = r;
    if (a(pivot, col).real() == 0.0)
      throw Error(ErrorKind::chart_domain_violation, "complex-step oracle hit a singular pivot");
    if (pivot != col) {
      a.row(pivot).swap(a.row(col));
      b.row(pivot).swap(b.row(col));
    }
    for (Index r = col + 1; r < n; ++r) {
      const std::complex<double> factor = a(r, col) / a(col, col);
      if (factor == 0.0) continue;
      for (Index c = col; c < n; ++c) a(r, c) -= factor * a(col, c);
      for (Index c = 0; c < b.cols(); ++c) b(r, c) -= factor * b(col, c);
    }
  }
  for (Index col = n; col-- > 0;) {
    for (Index c = 0; c < b.cols(); ++c) {
      std::complex<double> acc = b(col, c);
      for (Index k = col + 1; k < n; ++k) acc -= a(col, k) * b(k, c);
      b(col, c) = acc / a(col, col);
    }
  }
  return b;
}

StepMat pick_rows(const StepMat& m, Index n, Index begin, Index count) {
  StepMat out(2 * count, m.cols());
  out.topRows(count) = m.middleRows(begin, count);
  out.bottomRows(count) = m.middleRows(n + begin, count);
  return out;
}

}  // namespace

Mat transition_via_graph(const ChartPoint& pt, const ChartId& target) {
  return chart_forward(chart_inverse(pt), target).A;
}

Mat complex_step_derivative(const ChartPoint& pt, const ChartId& target, const Mat& x,
                            double h) {
  const Index n = pt.chart.ambient_dim();
  const Index k = pt.chart.f().dim();
  const Index m = n - k;

  Mat joint(n, n);
  joint << target.f().basis(), target.g().basis();

  StepMat a = lift(realify(pt.A));
  a += std::complex<double>(0.0, h) * lift(realify(x));
  const StepMat graph = lift(realify(pt.chart.f().basis())) +
                        lift(realify(pt.chart.g().basis())) * a;
  const StepMat coeffs = solve(lift(realify(joint)), graph);
  const StepMat d_f = pick_rows(coeffs, n, 0, k);
  const StepMat d_g = pick_rows(coeffs, n, k, m);
  const StepMat image = solve(d_f.transpose(), d_g.transpose()).transpose();

  const Eigen::MatrixXd deriv = image.imag() / h;
  Mat out(m, k);
  out.real() = deriv.topLeftCorner(m, k);
  out.imag() = deriv.bottomLeftCorner(m, k);
  return out;
}

Mat central_difference(const ChartPoint& pt, const ChartId& target, const Mat& x, double h) {
  const Mat plus = transition_base(ChartPoint(pt.chart, pt.A + h * x), target).A;
  const Mat minus = transition_base(ChartPoint(pt.chart, pt.A - h * x), target).A;
  return (plus - minus) / (2.0 * h);
}

cplx trace_double_sum(const Mat& mu, const Mat& x) {
  cplx total = 0.0;
  for (Index a = 0; a < mu.rows(); ++a)
    for (Index b = 0; b < mu.cols(); ++b) total += mu(a, b) * x(b, a);
  return total;
}

}  // namespace grassmann::oracle
