#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

// Exact law of one sampled increment of the compound Poisson process with
// symmetric +-1 jumps: pmf f(x, k) = exp(-x) I_|k|(x) with x = theta * delta,
// sampling, score and Hessian of the log pmf, and moment identities.
namespace timescales {

struct ModelParams {
  double theta = 1.0;  // jump intensity per unit time, > 0
};

struct SamplingScheme {
  double horizon = 1.0;  // T
  double step = 1.0;     // delta, 0 < delta <= T

  // number of observed increments, floor(T / delta) >= 1
  long long count() const;
};

struct IncrementSeries {
  std::vector<int> values;
  SamplingScheme scheme;
};

enum class Regime { Microscopic, Intermediate, Macroscopic };

void validate(const ModelParams& params);
void validate(const SamplingScheme& scheme);

// P(X_delta = k) = exp(-x) I_|k|(x), x = theta * delta > 0.
double pmf(double x, int k);

// log pmf(x, k) for k = 0..k_max from a single ratio table; the batched form
// every expectation below uses.
std::vector<double> log_pmf_table(double x, int k_max);

// phi_m(k): probability that a symmetric +-1 walk started at 0 sits at k
// after exactly m steps.
double walk_kernel(int m, int k);

// Truncated Poisson mixture sum_{m <= m_max} phi_m(k) e^{-x} x^m / m!.
// Independent of the Bessel evaluation path; throws if the Poisson tail
// beyond m_max cannot be certified below 1e-14 (message carries the bound).
double pmf_oracle(double x, int k, int m_max);

// n independent Skellam draws, one counter-based stream per index.
IncrementSeries sample_increments(const ModelParams& params,
                                  const SamplingScheme& scheme,
                                  std::uint64_t seed);

// d/dtheta log pmf = delta * (h(|k|, x) + |k|/x - 1), h = I_{|k|+1}/I_{|k|}.
double score(const ModelParams& params, double step, int k);

// d2/dtheta2 log pmf
//   = delta^2 I_{|k|+2}/I_{|k|} + (delta/theta) h - delta^2 h^2 - |k|/theta^2.
double log_pmf_hessian(const ModelParams& params, double step, int k);

struct Moments {
  double second;  // E X^2 = x
  double fourth;  // E X^4 = x (1 + 3x)
};

Moments central_moments(double x);

// Var(X^2) = x (1 + 2x); drives the quadratic-variation CLT variance.
double qv_summand_variance(double x);

// CSV: header "index,increment", one row per observation.  Lines starting
// with '#' are treated as comments on read.
void write_increments_csv(std::ostream& out, const IncrementSeries& series);
std::vector<int> read_increments_csv(std::istream& in);

}  // namespace timescales
