#pragma once

// Reference computations that share no code path with the bundle kernels
// they check. Used by the verifier suites and the tests.

#include "grassmann/atlas.hpp"

namespace grassmann::oracle {

/// Base transition through the graph: chart_forward(chart_inverse(pt), target).
Mat transition_via_graph(const ChartPoint& pt, const ChartId& target);

/// Derivative of the base transition along X by the complex-step method.
/// Every complex matrix is embedded as the real block [[Re, −Im], [Im, Re]];
/// the transition is then re-evaluated with an independent imaginary unit
/// carrying the step h·X, using a hand-written elimination that never
/// conjugates. Im(result)/h is free of subtractive cancellation.
Mat complex_step_derivative(const ChartPoint& pt, const ChartId& target, const Mat& x,
                            double h = 1e-30);

/// (ψ(A + hX) − ψ(A − hX)) / 2h through transition_base.
Mat central_difference(const ChartPoint& pt, const ChartId& target, const Mat& x,
                       double h = 1e-5);

/// Σ_{a,b} μ_ab X_ba.
cplx trace_double_sum(const Mat& mu, const Mat& x);

}  // namespace grassmann::oracle
