#include "grassmann/atlas.hpp"

#include <cmath>
#include <utility>

#include "grassmann/error.hpp"

namespace grassmann {

namespace {

double smallest_singular_value(const Mat& m) {
  if (m.size() == 0) return 1.0;
  const RVec s = singular_values(m);
  return s[s.size() - 1];
}

void require_same_ambient(Index a, Index b, const char* where) {
  if (a != b)
    throw Error(ErrorKind::dimension_mismatch,
                std::string(where) + ": ambient dimensions differ");
}

}  // namespace

// ---------------------------------------------------------------------------
// Subspace

Subspace::Subspace(Mat basis) : basis_(std::move(basis)) {
  projector_ = basis_ * basis_.adjoint();
}

Subspace Subspace::from_spanning(const Mat& columns) {
  return Subspace(orthonormalize(columns));
}

Subspace Subspace::from_orthonormal(const Mat& basis) {
  const Mat gram = basis.adjoint() * basis - Mat::Identity(basis.cols(), basis.cols());
  if (!spectral_norm_at_most(gram, 1e-12))
    throw Error(ErrorKind::invalid_argument, "basis columns are not orthonormal");
  return Subspace(basis);
}

double projector_distance(const Subspace& a, const Subspace& b) {
  require_same_ambient(a.ambient_dim(), b.ambient_dim(), "projector_distance");
  return operator_norm(a.projector() - b.projector());
}

bool same_subspace(const Subspace& a, const Subspace& b, double tol_eq) {
  if (a.ambient_dim() != b.ambient_dim() || a.dim() != b.dim()) return false;
  return spectral_norm_at_most(a.projector() - b.projector(), tol_eq);
}

// ---------------------------------------------------------------------------
// ChartId

struct ChartId::State {
  Subspace f;
  Subspace g;
  ChartFlavor flavor;
  double conditioning;
  Eigen::PartialPivLU<Mat> lu;
};

ChartId::ChartId(Subspace f, Subspace g, ChartFlavor flavor, double tol_split,
                 double tol_eq) {
  require_same_ambient(f.ambient_dim(), g.ambient_dim(), "ChartId");
  const Index n = f.ambient_dim();
  if (f.dim() + g.dim() != n)
    throw Error(ErrorKind::split_failure, "dim F + dim G != ambient dimension");
  if (flavor == ChartFlavor::hilbert) {
    const Mat complement = Mat::Identity(n, n) - f.projector();
    if (!spectral_norm_at_most(g.projector() - complement, tol_eq))
      throw Error(ErrorKind::invalid_argument, "hilbert chart requires G = F^perp");
  }
  Mat joint(n, n);
  joint << f.basis(), g.basis();
  double cond = 1.0;
  if (n > 0) {
    const RVec s = singular_values(joint);
    cond = s[n - 1] / s[0];
  }
  if (!(cond > tol_split))
    throw Error(ErrorKind::split_failure, "F and G are not complementary");
  Eigen::PartialPivLU<Mat> lu;
  if (n > 0) lu.compute(joint);
  state_ = std::make_shared<const State>(
      State{std::move(f), std::move(g), flavor, cond, std::move(lu)});
}

ChartId ChartId::hilbert(Subspace v) {
  Subspace perp = Subspace::from_orthonormal(orthogonal_complement(v.basis()));
  return ChartId(std::move(v), std::move(perp), ChartFlavor::hilbert);
}

const Subspace& ChartId::f() const { return state_->f; }
const Subspace& ChartId::g() const { return state_->g; }
ChartFlavor ChartId::flavor() const { return state_->flavor; }
double ChartId::split_conditioning() const { return state_->conditioning; }

Mat ChartId::coefficients(const Mat& v) const {
  require_same_ambient(v.rows(), ambient_dim(), "ChartId::coefficients");
  if (ambient_dim() == 0) return Mat(0, v.cols());
  return state_->lu.solve(v);
}

bool same_chart(const ChartId& a, const ChartId& b, double tol_eq) {
  return same_subspace(a.f(), b.f(), tol_eq) && same_subspace(a.g(), b.g(), tol_eq);
}

// ---------------------------------------------------------------------------
// ChartPoint

ChartPoint::ChartPoint(ChartId c, Mat a) : chart(std::move(c)), A(std::move(a)) {
  if (A.rows() != chart.g().dim() || A.cols() != chart.f().dim())
    throw Error(ErrorKind::dimension_mismatch,
                "chart coordinate must be dim(G) x dim(F)");
}

bool same_point(const ChartPoint& a, const ChartPoint& b) {
  if (a.A.rows() != b.A.rows() || a.A.cols() != b.A.cols()) return false;
  if ((a.A - b.A).norm() > 1e-12 * (1.0 + a.A.norm())) return false;
  return same_chart(a.chart, b.chart);
}

ObliqueProjections oblique_projections(const Subspace& f, const Subspace& g,
                                       double tol_split) {
  return oblique_projections(f.basis(), g.basis(), tol_split);
}

// ---------------------------------------------------------------------------
// Charts

DomainReport in_chart_domain(const Subspace& h, const ChartId& chart,
                             double tol_domain) {
  require_same_ambient(h.ambient_dim(), chart.ambient_dim(), "in_chart_domain");
  if (h.dim() != chart.f().dim())
    throw Error(ErrorKind::dimension_mismatch, "dim H != dim F");
  const Index k = h.dim();
  const Mat coeffs = chart.coefficients(h.basis());
  DomainReport report;
  report.conditioning = smallest_singular_value(coeffs.topRows(k));
  report.inside = report.conditioning > tol_domain;
  return report;
}

ChartPoint chart_forward(const Subspace& h, const ChartId& chart, double tol_domain) {
  require_same_ambient(h.ambient_dim(), chart.ambient_dim(), "chart_forward");
  if (h.dim() != chart.f().dim())
    throw Error(ErrorKind::dimension_mismatch, "dim H != dim F");
  const Index k = h.dim();
  const Mat coeffs = chart.coefficients(h.basis());
  const double cond = smallest_singular_value(coeffs.topRows(k));
  if (!(cond > tol_domain))
    throw Error(ErrorKind::chart_domain_violation,
                "H is not in the chart domain (conditioning " + std::to_string(cond) + ")");
  return ChartPoint(chart, right_solve(coeffs.bottomRows(coeffs.rows() - k),
                                       coeffs.topRows(k)));
}

Mat hilbert_chart_coordinates(const Subspace& w, const ChartId& chart,
                              double tol_domain) {
  if (chart.flavor() != ChartFlavor::hilbert)
    throw Error(ErrorKind::invalid_argument, "projector formula needs a hilbert chart");
  require_same_ambient(w.ambient_dim(), chart.ambient_dim(), "hilbert_chart_coordinates");
  if (w.dim() != chart.f().dim())
    throw Error(ErrorKind::dimension_mismatch, "dim W != dim V");
  const Mat& bv = chart.f().basis();
  const Mat& bperp = chart.g().basis();
  const Mat& pw = w.projector();
  // P_V P_W P_V on V, and P_V^⊥ P_W P_V from V to V^⊥.
  const Mat compressed = bv.adjoint() * pw * bv;
  const Mat off = bperp.adjoint() * pw * bv;
  // compressed = CᴴC-like, so its smallest singular value is conditioning².
  const double cond = std::sqrt(smallest_singular_value(compressed));
  if (!(cond > tol_domain))
    throw Error(ErrorKind::chart_domain_violation, "W is not in the chart domain");
  return right_solve(off, compressed);
}

Subspace chart_inverse(const ChartPoint& pt) {
  const Mat graph = pt.chart.f().basis() + pt.chart.g().basis() * pt.A;
  return Subspace::from_spanning(graph);
}

TransitionJet transition_jet(const ChartPoint& pt, const ChartId& target,
                             double tol_domain) {
  require_same_ambient(pt.chart.ambient_dim(), target.ambient_dim(), "transition");
  if (pt.chart.f().dim() != target.f().dim())
    throw Error(ErrorKind::dimension_mismatch, "charts belong to different components");
  const DomainReport domain = in_chart_domain(chart_inverse(pt), target, tol_domain);
  if (!domain.inside)
    throw Error(ErrorKind::chart_domain_violation,
                "point is outside the target chart domain (conditioning " +
                    std::to_string(domain.conditioning) + ")");

  const Index k = pt.chart.f().dim();
  const Index m = pt.chart.ambient_dim() - k;
  const Mat graph = pt.chart.f().basis() + pt.chart.g().basis() * pt.A;
  const Mat d = target.coefficients(graph);
  const Mat nn = target.coefficients(pt.chart.g().basis());

  TransitionJet jet;
  jet.d_f = d.topRows(k);
  jet.image = right_solve(d.bottomRows(m), jet.d_f);
  jet.n_f = nn.topRows(k);
  jet.n_g = nn.bottomRows(m);
  return jet;
}

ChartPoint transition_base(const ChartPoint& pt, const ChartId& target,
                           double tol_domain) {
  return ChartPoint(target, transition_jet(pt, target, tol_domain).image);
}

}  // namespace grassmann
