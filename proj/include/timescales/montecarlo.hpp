#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "timescales/estimators.hpp"

// Replicated simulation studies: empirical estimator variances against the
// information bounds across a grid of sampling steps.  Replica-parallel and
// bit-reproducible regardless of thread count.
namespace timescales::montecarlo {

struct ExperimentConfig {
  double theta = 1.0;
  std::vector<double> delta_grid;  // nonempty, strictly increasing
  long long n_per_scheme = 10000;  // increments per replica; T = n * delta
  int replicas = 1000;             // >= 2
  std::uint64_t seed = 0;
  std::vector<estimators::Method> methods = {estimators::Method::QV,
                                             estimators::Method::OneStep};
  int threads = 0;  // 0 = hardware concurrency
};

struct StudyRow {
  double delta = 0.0;
  estimators::Method estimator = estimators::Method::QV;
  double empirical_variance = 0.0;
  double theoretical_inverse_info = 0.0;  // 1 / I_{T,delta} at the truth
  double qv_theoretical_variance = 0.0;   // 1/I_{T,0} + 1/I_{T,inf} at the truth
  double ks_statistic = 0.0;              // standardised at the truth
  int failures = 0;
  bool flagged = false;  // failure rate above 1% in the cell
};

std::vector<StudyRow> run_variance_study(const ExperimentConfig& config);

// Kolmogorov-Smirnov statistic of (samples - center)/scale against the
// standard normal; requires at least 50 samples.
double normality_diagnostic(std::span<const double> samples, double center,
                            double scale);

double sample_variance(std::span<const double> samples);

// Jackknife standard error of the sample variance.
double jackknife_variance_se(std::span<const double> samples);

// CSV: header "delta,estimator,emp_var,inv_info,qv_var_theory,ks".
void write_study_csv(std::ostream& out, const std::vector<StudyRow>& rows);

}  // namespace timescales::montecarlo
