#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "timescales/estimators.hpp"
#include "timescales/fisher.hpp"
#include "timescales/montecarlo.hpp"
#include "timescales/random.hpp"

using namespace timescales;
using estimators::Method;

namespace {

IncrementSeries series_of(std::vector<int> values, double horizon, double step) {
  IncrementSeries series;
  series.values = std::move(values);
  series.scheme = {horizon, step};
  return series;
}

IncrementSeries replica(double theta, double delta, long long n, std::uint64_t seed) {
  return sample_increments({theta}, {static_cast<double>(n) * delta, delta}, seed);
}

double hessian_sum(const IncrementSeries& data, double theta) {
  double sum = 0.0;
  for (int v : data.values) sum += log_pmf_hessian({theta}, data.scheme.step, v);
  return sum;
}

}  // namespace

TEST_CASE("qv arithmetic") {
  const auto res = estimators::qv_estimate(series_of({1, -1, 1, 1}, 4.0, 1.0));
  CHECK(res.value == 1.0);
  CHECK(res.method == Method::QV);
  CHECK(!res.degenerate);
  // avar = theta(1 + 2 theta delta) / T at the estimate
  CHECK(res.avar == doctest::Approx(1.0 * 3.0 / 4.0).epsilon(1e-14));
  CHECK(res.stderr_ == doctest::Approx(std::sqrt(res.avar)).epsilon(1e-14));
}

TEST_CASE("qv degenerate and error paths") {
  const auto zero = estimators::qv_estimate(series_of({0, 0, 0}, 3.0, 1.0));
  CHECK(zero.value == 0.0);
  CHECK(zero.degenerate);
  CHECK(std::isnan(zero.avar));
  CHECK_THROWS_AS(estimators::qv_estimate(series_of({}, 1.0, 1.0)),
                  std::invalid_argument);
}

TEST_CASE("estimate result serialises as JSON") {
  const auto zero = estimators::qv_estimate(series_of({0, 0}, 2.0, 1.0));
  const auto j = nlohmann::json::parse(estimators::to_json(zero));
  CHECK(j["method"] == "qv");
  CHECK(j["value"] == 0.0);
  CHECK(j["avar"].is_null());  // NaN maps to null
  CHECK(j["flags"] == nlohmann::json::array({"degenerate"}));
  CHECK(j["converged"] == true);

  const auto fine = estimators::qv_estimate(series_of({1, 0, -1}, 3.0, 1.0));
  const auto j2 = nlohmann::json::parse(estimators::to_json(fine));
  CHECK(j2["flags"].empty());
  CHECK(j2["stderr"].get<double>() == doctest::Approx(fine.stderr_));
}

TEST_CASE("one-step correction is the Newton step off the QV point") {
  const auto data = replica(1.0, 0.6, 4000, 11);
  const auto qv = estimators::qv_estimate(data);
  const auto os = estimators::one_step_estimate(data);
  const double s = estimators::total_score(data, qv.value);
  const double h = hessian_sum(data, qv.value);
  CHECK(os.value == doctest::Approx(qv.value - s / h).epsilon(1e-12));
  CHECK(os.method == Method::OneStep);
  CHECK(!os.fallback);
  CHECK(os.iterations == 1);
  CHECK(os.avar ==
        doctest::Approx(1.0 / fisher::total_information({os.value}, data.scheme))
            .epsilon(1e-12));
}

TEST_CASE("a second correction no longer moves an efficient estimate") {
  // at the extreme scales the QV start is already efficient, so the Newton
  // residual is quadratically small; the intermediate scale carries an O(1)
  // deficiency in the start and is not part of this guarantee
  for (double delta : {0.01, 50.0}) {
    int moved = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto data = replica(1.0, delta, 100000, 300 + seed);
      const auto os = estimators::one_step_estimate(data);
      const double s = estimators::total_score(data, os.value);
      const double h = hessian_sum(data, os.value);
      const double second = os.value - s / h;
      if (std::abs(second - os.value) >= 1e-3 * os.stderr_) ++moved;
    }
    CHECK_MESSAGE(moved <= 1, "delta=", delta);
  }
}

TEST_CASE("one-step requires a usable QV point") {
  CHECK_THROWS_AS(estimators::one_step_estimate(series_of({0}, 1.0, 1.0)),
                  std::runtime_error);
}

TEST_CASE("mle root and its diagnostics") {
  const auto data = replica(1.0, 0.6, 4000, 17);
  const auto mle = estimators::mle_estimate(data);
  CHECK(mle.converged);
  CHECK(mle.value > 0.0);
  const double n_delta = static_cast<double>(data.values.size()) * data.scheme.step;
  CHECK(std::abs(estimators::total_score(data, mle.value)) < 1e-10 * n_delta);

  // the likelihood at the root beats both default bracket ends
  const double qv = estimators::qv_estimate(data).value;
  const double at_root = estimators::total_log_likelihood(data, mle.value);
  CHECK(at_root >= estimators::total_log_likelihood(data, qv / 8.0));
  CHECK(at_root >= estimators::total_log_likelihood(data, qv * 8.0));
}

TEST_CASE("score changes sign across extreme scales for nonzero data") {
  const auto data = replica(1.0, 0.6, 2000, 23);
  const double delta = data.scheme.step;
  CHECK(estimators::total_score(data, 1e-6 / delta) > 0.0);
  CHECK(estimators::total_score(data, 1e3 / delta) < 0.0);
}

TEST_CASE("mle error paths") {
  CHECK_THROWS_WITH_AS(estimators::mle_estimate(series_of({0, 0, 0, 0}, 4.0, 1.0)),
                       doctest::Contains("zero"), std::runtime_error);
  const auto data = replica(1.0, 0.6, 500, 29);
  const double qv = estimators::qv_estimate(data).value;
  // both ends on the same side of the root: report the score values
  CHECK_THROWS_WITH_AS(estimators::mle_estimate(data, std::pair{3.0 * qv, 4.0 * qv}),
                       doctest::Contains("sign change"), std::runtime_error);
  CHECK_THROWS_AS(estimators::mle_estimate(data, std::pair{-1.0, 2.0}),
                  std::domain_error);
}

TEST_CASE("mle and one-step agree to first order") {
  // both are efficient, so they differ by o(stderr)
  int close = 0;
  const int reps = 200;
  for (int r = 0; r < reps; ++r) {
    const auto data = replica(1.0, 0.6, 100000, 7000 + static_cast<std::uint64_t>(r));
    const auto os = estimators::one_step_estimate(data);
    const auto mle = estimators::mle_estimate(data);
    if (std::abs(mle.value - os.value) < 0.1 * os.stderr_) ++close;
  }
  CHECK(close >= 190);
}

TEST_CASE("qv is unbiased by exact expectation") {
  // E[(1/T) sum d^2] = theta * (n delta / T) via the second moment
  const SamplingScheme scheme{10.0, 0.3};
  const double theta = 1.7;
  const double expectation = central_moments(theta * scheme.step).second *
                             static_cast<double>(scheme.count()) / scheme.horizon;
  CHECK(expectation ==
        doctest::Approx(theta * scheme.count() * scheme.step / scheme.horizon)
            .epsilon(1e-12));
}

TEST_CASE("variance sanity against the asymptotic forms at desk scale") {
  const double theta = 1.0, delta = 0.6;
  const int reps = 400;
  const long long n = 5000;
  std::vector<double> qv_values, os_values;
  for (int r = 0; r < reps; ++r) {
    const auto data = replica(theta, delta, n, 500 + static_cast<std::uint64_t>(r));
    qv_values.push_back(estimators::qv_estimate(data).value);
    os_values.push_back(estimators::one_step_estimate(data).value);
  }
  const SamplingScheme scheme{static_cast<double>(n) * delta, delta};
  const double qv_theory = qv_summand_variance(theta * delta) *
                           static_cast<double>(scheme.count()) /
                           (scheme.horizon * scheme.horizon);
  const double var_qv = montecarlo::sample_variance(qv_values);
  const double se_qv = montecarlo::jackknife_variance_se(qv_values);
  CHECK(std::abs(var_qv - qv_theory) <= 4.0 * se_qv);

  // efficiency ordering up to Monte Carlo noise
  const double var_os = montecarlo::sample_variance(os_values);
  const double se_os = montecarlo::jackknife_variance_se(os_values);
  CHECK(var_os <= var_qv + 3.0 * (se_qv + se_os));
}

TEST_CASE("standardised qv is asymptotically normal at desk scale") {
  const double theta = 1.0;
  for (double delta : {0.01, 0.6, 50.0}) {
    const int reps = 300;
    const long long n = 4000;
    std::vector<double> values;
    for (int r = 0; r < reps; ++r)
      values.push_back(
          estimators::qv_estimate(replica(theta, delta, n, 900 + static_cast<std::uint64_t>(r)))
              .value);
    const SamplingScheme scheme{static_cast<double>(n) * delta, delta};
    const double sd = std::sqrt(qv_summand_variance(theta * delta) *
                                static_cast<double>(scheme.count()) /
                                (scheme.horizon * scheme.horizon));
    const double ks = montecarlo::normality_diagnostic(values, theta, sd);
    CHECK_MESSAGE(ks < 1.628 / std::sqrt(static_cast<double>(reps)), "delta=", delta,
                  " ks=", ks);
  }
}
