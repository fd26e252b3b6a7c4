#pragma once

#include <vector>

#include "timescales/increment_law.hpp"

// Fisher information per increment and per experiment, the closed-form
// regime limits, and the deficiency ratio of the quadratic-variation
// estimator against the efficient bound.
namespace timescales::fisher {

// psi(x) = sum_k pmf(x,k) (h(|k|,x) + |k|/x - 1)^2 by exact summation.
// Per-increment Fisher information is delta^2 * psi(theta * delta);
// x * psi(x) -> 1 as x -> 0 and 2 x^2 psi(x) -> 1 as x -> infinity.
double psi(double x);

// floor(T/delta) * delta^2 * psi(theta * delta)
double total_information(const ModelParams& params, const SamplingScheme& scheme);

// Closed-form limits: micro T/theta, macro (T/delta) / (2 theta^2),
// intermediate T * delta * psi(theta * delta).
double limit_information(Regime regime, const ModelParams& params,
                         const SamplingScheme& scheme);

// psi(x) (2x^2 + x): asymptotic variance ratio var(QV)/var(efficient).
double deficiency_ratio(double x);

struct DeficiencyMax {
  double x_star = 0.0;
  double ratio_star = 0.0;
  bool boundary = false;  // maximum pinned at a bracket end
};

// Golden-section maximum of the deficiency ratio on [x_lo, x_hi]; guards
// with a three-point unimodality check and throws naming the offending
// triple if the bracket is seen to be non-unimodal.
DeficiencyMax max_deficiency(double x_lo, double x_hi, double tol);

struct InfoCurvePoint {
  double x;      // theta * delta
  double psi;    // per-increment normalised information
  double ratio;  // psi(x) (2x^2 + x)
};

std::vector<InfoCurvePoint> deficiency_curve(double x_lo, double x_hi,
                                             int points, bool log_spaced = true);

}  // namespace timescales::fisher
