#include "timescales/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "timescales/bessel.hpp"
#include "timescales/fisher.hpp"
#include "timescales/io.hpp"

namespace timescales::estimators {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Increments repeat heavily, so every total over the data is a short sum
// over the histogram of |k|.
struct Histogram {
  std::vector<long long> counts;  // counts[|k|]
  int k_max = 0;
  long long n = 0;
  double sum_sq = 0.0;
};

Histogram build_histogram(const IncrementSeries& data) {
  if (data.values.empty())
    throw std::invalid_argument("estimators: empty increment series");
  validate(data.scheme);
  Histogram hist;
  hist.n = static_cast<long long>(data.values.size());
  int k_max = 0;
  for (int v : data.values) k_max = std::max(k_max, std::abs(v));
  hist.k_max = k_max;
  hist.counts.assign(static_cast<std::size_t>(k_max) + 1, 0);
  for (int v : data.values) {
    ++hist.counts[static_cast<std::size_t>(std::abs(v))];
    hist.sum_sq += static_cast<double>(v) * v;
  }
  return hist;
}

double score_total(const Histogram& hist, double theta, double delta) {
  const double x = theta * delta;
  const std::vector<double> r = bessel::bessel_ratio_table(hist.k_max, x);
  double total = 0.0;
  for (int k = 0; k <= hist.k_max; ++k) {
    const long long c = hist.counts[static_cast<std::size_t>(k)];
    if (c == 0) continue;
    total += c * delta * (r[static_cast<std::size_t>(k)] + k / x - 1.0);
  }
  return total;
}

double hessian_total(const Histogram& hist, double theta, double delta) {
  const double x = theta * delta;
  const std::vector<double> r = bessel::bessel_ratio_table(hist.k_max + 1, x);
  double total = 0.0;
  for (int k = 0; k <= hist.k_max; ++k) {
    const long long c = hist.counts[static_cast<std::size_t>(k)];
    if (c == 0) continue;
    const double h = r[static_cast<std::size_t>(k)];
    const double h2 = h * r[static_cast<std::size_t>(k) + 1];
    total += c * (delta * delta * (h2 - h * h) + (delta / theta) * h -
                  k / (theta * theta));
  }
  return total;
}

double log_likelihood_total(const Histogram& hist, double theta, double delta) {
  const double x = theta * delta;
  const std::vector<double> logp = log_pmf_table(x, hist.k_max);
  double total = 0.0;
  for (int k = 0; k <= hist.k_max; ++k) {
    const long long c = hist.counts[static_cast<std::size_t>(k)];
    if (c != 0) total += c * logp[static_cast<std::size_t>(k)];
  }
  return total;
}

double fill_avar(EstimateResult& res, const SamplingScheme& scheme) {
  res.avar = 1.0 / fisher::total_information({res.value}, scheme);
  res.stderr_ = std::sqrt(res.avar);
  return res.avar;
}

EstimateResult mle_from_histogram(const Histogram& hist, const SamplingScheme& scheme,
                                  std::optional<std::pair<double, double>> bracket) {
  const double delta = scheme.step;
  const double n_delta = static_cast<double>(hist.n) * delta;
  if (hist.counts[0] == hist.n)
    throw std::runtime_error(
        "mle_estimate: all increments are zero; the likelihood exp(-theta T) is "
        "decreasing and has no interior maximiser");

  const double theta_qv = hist.sum_sq / scheme.horizon;
  double lo, hi;
  bool expandable = !bracket.has_value();
  if (bracket) {
    lo = bracket->first;
    hi = bracket->second;
    if (!(lo > 0.0) || !(hi > lo))
      throw std::domain_error("mle_estimate: need 0 < bracket.first < bracket.second");
  } else {
    lo = theta_qv / 8.0;
    hi = theta_qv * 8.0;
  }

  double score_lo = score_total(hist, lo, delta);
  double score_hi = score_total(hist, hi, delta);
  for (int round = 0; expandable && score_lo <= 0.0 && round < 8; ++round) {
    lo /= 4.0;
    score_lo = score_total(hist, lo, delta);
  }
  for (int round = 0; expandable && score_hi >= 0.0 && round < 8; ++round) {
    hi *= 4.0;
    score_hi = score_total(hist, hi, delta);
  }
  if (!(score_lo > 0.0) || !(score_hi < 0.0))
    throw std::runtime_error("mle_estimate: no sign change of the score on [" +
                             io::format_g17(lo) + ", " + io::format_g17(hi) +
                             "]: score(lo)=" + io::format_g17(score_lo) +
                             ", score(hi)=" + io::format_g17(score_hi));

  EstimateResult res;
  res.method = Method::MLE;
  double theta = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double s = score_total(hist, theta, delta);
    res.iterations = it + 1;
    if (std::abs(s) < 1e-12 * n_delta) {
      res.converged = true;
      break;
    }
    if (s > 0.0)
      lo = theta;
    else
      hi = theta;
    const double h = hessian_total(hist, theta, delta);
    double next = h < 0.0 ? theta - s / h : kNaN;
    if (!std::isfinite(next) || next <= lo || next >= hi) next = 0.5 * (lo + hi);
    if (std::abs(next - theta) < 1e-15 * theta) {
      theta = next;
      res.converged = true;
      break;
    }
    theta = next;
  }
  res.value = theta;
  fill_avar(res, scheme);
  return res;
}

}  // namespace

const char* method_name(Method method) {
  switch (method) {
    case Method::QV: return "qv";
    case Method::OneStep: return "one_step";
    case Method::MLE: return "mle";
  }
  return "unknown";
}

std::string to_json(const EstimateResult& result) {
  nlohmann::json j;
  j["value"] = result.value;
  j["stderr"] = result.stderr_;
  j["avar"] = result.avar;
  j["method"] = method_name(result.method);
  j["converged"] = result.converged;
  j["iterations"] = result.iterations;
  nlohmann::json flags = nlohmann::json::array();
  if (result.degenerate) flags.push_back("degenerate");
  if (result.fallback) flags.push_back("fallback");
  j["flags"] = flags;
  return j.dump();
}

EstimateResult qv_estimate(const IncrementSeries& data) {
  if (data.values.empty())
    throw std::invalid_argument("qv_estimate: empty increment series");
  validate(data.scheme);
  double sum_sq = 0.0;
  for (int v : data.values) sum_sq += static_cast<double>(v) * v;
  EstimateResult res;
  res.method = Method::QV;
  res.value = sum_sq / data.scheme.horizon;
  res.converged = true;
  if (sum_sq == 0.0) {
    res.degenerate = true;
    res.avar = kNaN;
    res.stderr_ = kNaN;
    return res;
  }
  // 1/I_{T,0} + 1/I_{T,inf} evaluated at the estimate
  const double t = data.scheme.horizon;
  res.avar = res.value * (1.0 + 2.0 * res.value * data.scheme.step) / t;
  res.stderr_ = std::sqrt(res.avar);
  return res;
}

EstimateResult one_step_estimate(const IncrementSeries& data) {
  const EstimateResult qv = qv_estimate(data);
  if (qv.degenerate)
    throw std::runtime_error(
        "one_step_estimate: quadratic variation is degenerate (all increments zero)");
  const Histogram hist = build_histogram(data);
  const double delta = data.scheme.step;
  const double s = score_total(hist, qv.value, delta);
  const double h = hessian_total(hist, qv.value, delta);
  const double corrected = qv.value - s / h;
  if (!(h < 0.0) || !std::isfinite(corrected) || corrected <= 0.0) {
    EstimateResult res = mle_from_histogram(hist, data.scheme, {});
    res.method = Method::OneStep;
    res.fallback = true;
    return res;
  }
  EstimateResult res;
  res.method = Method::OneStep;
  res.value = corrected;
  res.converged = true;
  res.iterations = 1;
  fill_avar(res, data.scheme);
  return res;
}

EstimateResult mle_estimate(const IncrementSeries& data,
                            std::optional<std::pair<double, double>> bracket) {
  const Histogram hist = build_histogram(data);
  return mle_from_histogram(hist, data.scheme, bracket);
}

double total_log_likelihood(const IncrementSeries& data, double theta) {
  const Histogram hist = build_histogram(data);
  validate(ModelParams{theta});
  return log_likelihood_total(hist, theta, data.scheme.step);
}

double total_score(const IncrementSeries& data, double theta) {
  const Histogram hist = build_histogram(data);
  validate(ModelParams{theta});
  return score_total(hist, theta, data.scheme.step);
}

}  // namespace timescales::estimators
