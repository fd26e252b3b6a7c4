#pragma once

#include <optional>
#include <string>
#include <utility>

#include "timescales/increment_law.hpp"

// The three estimators of the jump intensity: quadratic variation, one-step
// Newton correction of it, and the full maximum likelihood root.
namespace timescales::estimators {

enum class Method { QV, OneStep, MLE };

const char* method_name(Method method);

struct EstimateResult {
  double value = 0.0;   // estimate of theta
  double avar = 0.0;    // asymptotic variance proxy, evaluated at the estimate
  double stderr_ = 0.0; // sqrt(avar)
  Method method = Method::QV;
  bool converged = false;
  int iterations = 0;
  bool degenerate = false;  // all-zero data (QV only)
  bool fallback = false;    // one-step correction fell back to the MLE
};

// JSON record: value, stderr, avar, method, converged, iterations, flags.
std::string to_json(const EstimateResult& result);

// (1/T) sum d_i^2.  avar = 1/I_{T,0} + 1/I_{T,inf} at the estimate.  All-zero
// data yields value 0 with the degenerate flag and NaN variance.
EstimateResult qv_estimate(const IncrementSeries& data);

// One Newton-Raphson step off the QV estimate using the exact score and
// Hessian; adapts to the full-information bound at every scale.  Wrong-sign
// Hessian or a step leaving (0, inf) falls back to the MLE.
EstimateResult one_step_estimate(const IncrementSeries& data);

// Zero of the total score, bracketed bisection refined by safeguarded
// Newton.  All-zero data has no interior maximiser and throws.
EstimateResult mle_estimate(const IncrementSeries& data,
                            std::optional<std::pair<double, double>> bracket = {});

// sum_i log pmf(theta * delta, d_i)
double total_log_likelihood(const IncrementSeries& data, double theta);

// sum_i score(theta, delta, d_i)
double total_score(const IncrementSeries& data, double theta);

}  // namespace timescales::estimators
