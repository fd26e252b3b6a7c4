#include "timescales/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "timescales/fisher.hpp"
#include "timescales/io.hpp"
#include "timescales/random.hpp"

namespace timescales::montecarlo {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void validate_config(const ExperimentConfig& config) {
  validate(ModelParams{config.theta});
  if (config.delta_grid.empty())
    throw std::domain_error("ExperimentConfig: delta grid must be nonempty");
  for (std::size_t i = 0; i < config.delta_grid.size(); ++i) {
    if (!(config.delta_grid[i] > 0.0))
      throw std::domain_error("ExperimentConfig: deltas must be positive");
    if (i > 0 && !(config.delta_grid[i] > config.delta_grid[i - 1]))
      throw std::domain_error("ExperimentConfig: delta grid must be strictly increasing");
  }
  if (config.n_per_scheme < 1)
    throw std::domain_error("ExperimentConfig: n_per_scheme must be >= 1");
  if (config.replicas < 2)
    throw std::domain_error("ExperimentConfig: replicas must be >= 2");
  if (config.methods.empty())
    throw std::domain_error("ExperimentConfig: at least one estimator required");
}

double run_estimator(estimators::Method method, const IncrementSeries& series) {
  switch (method) {
    case estimators::Method::QV: {
      const auto res = estimators::qv_estimate(series);
      if (res.degenerate)
        throw std::runtime_error("degenerate replica");
      return res.value;
    }
    case estimators::Method::OneStep:
      return estimators::one_step_estimate(series).value;
    case estimators::Method::MLE:
      return estimators::mle_estimate(series).value;
  }
  throw std::domain_error("unknown estimator");
}

}  // namespace

std::vector<StudyRow> run_variance_study(const ExperimentConfig& config) {
  validate_config(config);
  int n_threads = config.threads > 0
                      ? config.threads
                      : static_cast<int>(std::thread::hardware_concurrency());
  n_threads = std::max(1, std::min(n_threads, config.replicas));

  std::vector<StudyRow> rows;
  for (std::size_t d = 0; d < config.delta_grid.size(); ++d) {
    const double delta = config.delta_grid[d];
    const SamplingScheme scheme{static_cast<double>(config.n_per_scheme) * delta, delta};
    const ModelParams truth{config.theta};

    // one slot per (method, replica); filled independently, aggregated in
    // fixed order afterwards so the schedule cannot leak into the output
    std::vector<std::vector<double>> estimates(
        config.methods.size(), std::vector<double>(config.replicas, kNaN));

    const auto worker = [&](int first, int last) {
      for (int r = first; r < last; ++r) {
        const std::uint64_t replica_seed =
            rng::stream_key(config.seed, static_cast<std::uint64_t>(d),
                            static_cast<std::uint64_t>(r));
        const IncrementSeries series = sample_increments(truth, scheme, replica_seed);
        for (std::size_t m = 0; m < config.methods.size(); ++m) {
          try {
            estimates[m][static_cast<std::size_t>(r)] =
                run_estimator(config.methods[m], series);
          } catch (const std::exception&) {
            // leave NaN; counted below
          }
        }
      }
    };

    if (n_threads == 1) {
      worker(0, config.replicas);
    } else {
      std::vector<std::thread> pool;
      const int chunk = (config.replicas + n_threads - 1) / n_threads;
      for (int t = 0; t < n_threads; ++t) {
        const int first = t * chunk;
        const int last = std::min(config.replicas, first + chunk);
        if (first < last) pool.emplace_back(worker, first, last);
      }
      for (auto& th : pool) th.join();
    }

    const double inv_info = 1.0 / fisher::total_information(truth, scheme);
    const double x = config.theta * delta;
    const double qv_theory =
        qv_summand_variance(x) * static_cast<double>(scheme.count()) /
        (scheme.horizon * scheme.horizon);

    for (std::size_t m = 0; m < config.methods.size(); ++m) {
      StudyRow row;
      row.delta = delta;
      row.estimator = config.methods[m];
      row.theoretical_inverse_info = inv_info;
      row.qv_theoretical_variance = qv_theory;

      std::vector<double> ok;
      ok.reserve(static_cast<std::size_t>(config.replicas));
      for (double v : estimates[m])
        if (std::isfinite(v)) ok.push_back(v);
      row.failures = config.replicas - static_cast<int>(ok.size());
      row.flagged = row.failures > config.replicas / 100;
      row.empirical_variance = ok.size() >= 2 ? sample_variance(ok) : kNaN;
      const double scale = config.methods[m] == estimators::Method::QV
                               ? std::sqrt(qv_theory)
                               : std::sqrt(inv_info);
      row.ks_statistic = ok.size() >= 50
                             ? normality_diagnostic(ok, config.theta, scale)
                             : kNaN;
      rows.push_back(row);
    }
  }
  return rows;
}

double normality_diagnostic(std::span<const double> samples, double center,
                            double scale) {
  if (samples.size() < 50)
    throw std::invalid_argument("normality_diagnostic: need at least 50 samples");
  if (!(scale > 0.0))
    throw std::invalid_argument("normality_diagnostic: scale must be positive");
  std::vector<double> z(samples.begin(), samples.end());
  for (double& v : z) v = (v - center) / scale;
  std::sort(z.begin(), z.end());
  const double n = static_cast<double>(z.size());
  double d = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double cdf = 0.5 * std::erfc(-z[i] / std::sqrt(2.0));
    d = std::max(d, std::max((i + 1) / n - cdf, cdf - i / n));
  }
  return d;
}

double sample_variance(std::span<const double> samples) {
  if (samples.size() < 2)
    throw std::invalid_argument("sample_variance: need at least 2 samples");
  double mean = 0.0;
  for (double v : samples) mean += v;
  mean /= static_cast<double>(samples.size());
  double m2 = 0.0;
  for (double v : samples) m2 += (v - mean) * (v - mean);
  return m2 / (static_cast<double>(samples.size()) - 1.0);
}

double jackknife_variance_se(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 3)
    throw std::invalid_argument("jackknife_variance_se: need at least 3 samples");
  const double dn = static_cast<double>(n);
  double mean = 0.0;
  for (double v : samples) mean += v;
  mean /= dn;
  double m2 = 0.0;
  for (double v : samples) m2 += (v - mean) * (v - mean);

  // leave-one-out variances via M2_i = M2 - n/(n-1) (x_i - mean)^2
  const auto loo_variance = [&](double v) {
    return (m2 - dn / (dn - 1.0) * (v - mean) * (v - mean)) / (dn - 2.0);
  };
  double sum = 0.0;
  for (double v : samples) sum += loo_variance(v);
  const double var_bar = sum / dn;
  double spread = 0.0;
  for (double v : samples) {
    const double d = loo_variance(v) - var_bar;
    spread += d * d;
  }
  return std::sqrt((dn - 1.0) / dn * spread);
}

void write_study_csv(std::ostream& out, const std::vector<StudyRow>& rows) {
  out << "delta,estimator,emp_var,inv_info,qv_var_theory,ks\n";
  for (const StudyRow& row : rows) {
    out << io::format_g17(row.delta) << ',' << estimators::method_name(row.estimator)
        << ',' << io::format_g17(row.empirical_variance) << ','
        << io::format_g17(row.theoretical_inverse_info) << ','
        << io::format_g17(row.qv_theoretical_variance) << ','
        << io::format_g17(row.ks_statistic) << '\n';
  }
}

}  // namespace timescales::montecarlo
