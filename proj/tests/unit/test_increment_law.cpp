#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "oracles.hpp"
#include "timescales/increment_law.hpp"

using namespace timescales;

namespace {

// test-side truncation for expectations over the increment law
int support_bound(double x) {
  return static_cast<int>(std::ceil(x + 12.0 * std::sqrt(x) + 40.0));
}

template <class F>
double expect(double x, F f) {
  const int cap = support_bound(x);
  double sum = pmf(x, 0) * f(0);
  for (int k = 1; k <= cap; ++k) sum += pmf(x, k) * (f(k) + f(-k));
  return sum;
}

}  // namespace

TEST_CASE("pmf spot values and symmetry") {
  CHECK(pmf(1.0, 0) ==
        doctest::Approx(static_cast<double>(oracles::pmf_mixture(1.0L, 0))).epsilon(1e-13));
  CHECK(pmf(1.0, 0) == doctest::Approx(0.46575960759364).epsilon(1e-12));
  for (double x : {0.05, 0.7, 4.0})
    for (int k : {1, 2, 5, 11}) CHECK(pmf(x, k) == pmf(x, -k));
  CHECK_THROWS_AS(pmf(0.0, 1), std::domain_error);
  CHECK_THROWS_AS(pmf(-1.0, 0), std::domain_error);
}

TEST_CASE("pmf sums to one") {
  for (double x : {0.01, 0.6, 1.0, 10.0, 50.0}) {
    const int cap = support_bound(x);
    const auto logp = log_pmf_table(x, cap);
    double sum = std::exp(logp[0]);
    for (int k = 1; k <= cap; ++k) sum += 2.0 * std::exp(logp[static_cast<std::size_t>(k)]);
    CHECK(std::abs(sum - 1.0) <= 1e-12);
  }
}

TEST_CASE("walk kernel") {
  CHECK(walk_kernel(0, 0) == 1.0);
  CHECK(walk_kernel(1, 1) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(walk_kernel(2, 0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(walk_kernel(2, 2) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(walk_kernel(3, 0) == 0.0);   // parity
  CHECK(walk_kernel(2, 5) == 0.0);   // out of range
  CHECK(walk_kernel(4, -2) == walk_kernel(4, 2));
  CHECK_THROWS_AS(walk_kernel(-1, 0), std::domain_error);
  for (int m : {1, 6, 17, 40}) {
    double row = walk_kernel(m, 0);
    for (int k = 1; k <= m; ++k) row += 2.0 * walk_kernel(m, k);
    CHECK(row == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("pmf against the mixture oracle") {
  for (double x : {0.1, 0.6, 1.0, 3.0, 10.0}) {
    for (int k = 0; k <= 30; ++k) {
      const long double want = oracles::pmf_mixture(x, k);
      const double got = pmf(x, k);
      if (want > 1e-290)
        CHECK_MESSAGE(std::abs(static_cast<double>(got - want)) <=
                          1e-12 * static_cast<double>(want),
                      "x=", x, " k=", k);
    }
  }
}

TEST_CASE("pmf_oracle operation") {
  CHECK(pmf_oracle(1.0, 0, 60) == doctest::Approx(pmf(1.0, 0)).epsilon(1e-12));
  CHECK(pmf_oracle(1.0, -4, 60) == doctest::Approx(pmf(1.0, 4)).epsilon(1e-12));
  // leading order at small x: e^{-x} x^3 / (2^3 3!)
  const double lead = std::exp(-0.01) * std::pow(0.01, 3) / 48.0;
  CHECK(pmf_oracle(0.01, 3, 40) == doctest::Approx(lead).epsilon(1e-4));
  // odd k: even-m terms contribute nothing, so truncating between odd m
  // levels changes nothing
  CHECK(pmf_oracle(0.5, 3, 43) == pmf_oracle(0.5, 3, 44));
  CHECK_THROWS_WITH_AS(pmf_oracle(1.0, 0, 3), doctest::Contains("tail"),
                       std::runtime_error);
}

TEST_CASE("sampler is deterministic in the seed") {
  const ModelParams params{1.3};
  const SamplingScheme scheme{50.0, 0.5};
  const auto a = sample_increments(params, scheme, 42);
  const auto b = sample_increments(params, scheme, 42);
  const auto c = sample_increments(params, scheme, 43);
  CHECK(a.values.size() == 100);
  CHECK(a.values == b.values);
  CHECK(a.values != c.values);
}

TEST_CASE("sampler rare-event limit") {
  // theta*delta = 1e-12 over 1000 increments: all zero except with
  // probability about 1e-9
  const auto series = sample_increments({1e-8}, {0.1, 1e-4}, 7);
  for (int v : series.values) CHECK(v == 0);
}

TEST_CASE("sampler matches the exact law (chi-square)") {
  for (double x : {0.1, 0.6, 5.0}) {
    const auto series = sample_increments({x}, {200000.0, 1.0}, 2024);
    const int window = support_bound(x);
    const double p = oracles::chi_square_pvalue(
        series.values, [x](int k) { return pmf(x, k); }, -window, window);
    CHECK_MESSAGE(p > 0.001, "x=", x, " p=", p);
  }
}

TEST_CASE("sampler agrees with the explicit-sign oracle sampler") {
  const double x = 0.6;
  const auto oracle_draws = oracles::explicit_sign_sampler(x, 200000, 99);
  const int window = support_bound(x);
  const double p = oracles::chi_square_pvalue(
      oracle_draws, [x](int k) { return pmf(x, k); }, -window, window);
  CHECK(p > 0.001);
}

TEST_CASE("sampler fourth moment at theta*delta = 1") {
  const auto series = sample_increments({1.0}, {1e6, 1.0}, 5);
  double m4 = 0.0, m8 = 0.0;
  for (int v : series.values) {
    const double d4 = std::pow(static_cast<double>(v), 4);
    m4 += d4;
    m8 += d4 * d4;
  }
  const double n = static_cast<double>(series.values.size());
  m4 /= n;
  m8 /= n;
  const double se = std::sqrt((m8 - m4 * m4) / n);
  CHECK(std::abs(m4 - 4.0) <= 3.0 * se);  // E X^4 = x(1+3x) = 4 at x = 1
}

TEST_CASE("score definition and sign structure") {
  // delta (h + |k|/x - 1) with the plus sign on |k|
  const long double h = oracles::bessel_i_series(1, 1.0L) / oracles::bessel_i_series(0, 1.0L);
  CHECK(score({1.0}, 1.0, 0) == doctest::Approx(static_cast<double>(h - 1.0L)).epsilon(1e-12));
  CHECK(score({1.0}, 1.0, 0) == doctest::Approx(-0.55361003410346).epsilon(1e-11));
  for (double theta : {0.5, 1.0, 2.0})
    for (double delta : {0.3, 1.0})
      for (int k : {1, 2, 5})
        if (k > theta * delta) CHECK(score({theta}, delta, k) > 0.0);
}

TEST_CASE("score has zero mean under the law") {
  for (double theta : {0.25, 1.0, 4.0}) {
    for (double delta : {0.1, 1.0, 10.0}) {
      const double x = theta * delta;
      const double mean =
          expect(x, [&](int k) { return score({theta}, delta, k); });
      CHECK_MESSAGE(std::abs(mean) <= 1e-10, "theta=", theta, " delta=", delta);
    }
  }
}

TEST_CASE("hessian matches a finite difference of the score") {
  const double h = 1e-5;
  for (double theta : {1.0, 2.0}) {
    for (int k : {0, 2, 7}) {
      const double fd =
          (score({theta + h}, 1.0, k) - score({theta - h}, 1.0, k)) / (2.0 * h);
      const double got = log_pmf_hessian({theta}, 1.0, k);
      CHECK_MESSAGE(std::abs(fd - got) <= 1e-5 * std::abs(got), "theta=", theta,
                    " k=", k);
    }
  }
}

TEST_CASE("information identity: E[-hessian] = E[score^2]") {
  for (double theta : {0.5, 1.0, 3.0}) {
    for (double delta : {0.2, 1.0, 5.0}) {
      const double x = theta * delta;
      const double info_h =
          expect(x, [&](int k) { return -log_pmf_hessian({theta}, delta, k); });
      const double info_s = expect(x, [&](int k) {
        const double s = score({theta}, delta, k);
        return s * s;
      });
      CHECK(info_h == doctest::Approx(info_s).epsilon(1e-8));
    }
  }
}

TEST_CASE("hessian plus |k|/theta^2 is nonnegative") {
  // the derivative of the Bessel ratio in theta is positive
  for (double theta : {0.5, 1.0, 2.0})
    for (double delta : {0.2, 1.0, 4.0})
      for (int k = 0; k <= 12; ++k)
        CHECK(log_pmf_hessian({theta}, delta, k) + k / (theta * theta) >= 0.0);
}

TEST_CASE("small-x expansion of the likelihood ratio term") {
  // h(k, x) ~ (x/2) / (|k|+1) near x = 0
  const double x = 1e-4;
  for (int k = 0; k <= 5; ++k) {
    const double h = std::exp(
        // I_{k+1}/I_k via the pmf: f(x,k+1)/f(x,k) = I_{k+1}/I_k
        std::log(pmf(x, k + 1) / pmf(x, k)));
    CHECK(h * 2.0 * (k + 1) / x == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("central moments") {
  const Moments at_one = central_moments(1.0);
  CHECK(at_one.second == 1.0);
  CHECK(at_one.fourth == 4.0);
  const Moments tiny = central_moments(1e-9);
  CHECK(tiny.second == doctest::Approx(1e-9).epsilon(1e-12));
  CHECK(tiny.fourth == doctest::Approx(1e-9).epsilon(1e-8));
  CHECK(qv_summand_variance(1.0) == 3.0);

  // exact summation of k^4 at x = 0.6
  double sum = 0.0;
  for (int k = 1; k <= 60; ++k)
    sum += 2.0 * pmf(0.6, k) * std::pow(static_cast<double>(k), 4);
  CHECK(std::abs(sum - 1.68) <= 1e-10);
}

TEST_CASE("scheme count is robust to binary step representations") {
  CHECK(SamplingScheme{100.0, 0.01}.count() == 10000);
  CHECK(SamplingScheme{100.0, 1.0}.count() == 100);
  CHECK(SamplingScheme{1.0, 0.3}.count() == 3);
  CHECK(SamplingScheme{0.5, 0.5}.count() == 1);
}

TEST_CASE("increments CSV round trip") {
  IncrementSeries series;
  series.scheme = {5.0, 1.0};
  series.values = {0, 3, -2, 1, 0};
  std::stringstream buffer;
  write_increments_csv(buffer, series);
  CHECK(buffer.str().rfind("index,increment\n", 0) == 0);
  const auto back = read_increments_csv(buffer);
  CHECK(back == series.values);
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(validate(ModelParams{0.0}), std::domain_error);
  CHECK_THROWS_AS(validate(ModelParams{-2.0}), std::domain_error);
  CHECK_THROWS_AS(validate(SamplingScheme{1.0, 0.0}), std::domain_error);
  CHECK_THROWS_AS(validate(SamplingScheme{1.0, 2.0}), std::domain_error);
  CHECK_THROWS_AS(score({1.0}, -1.0, 0), std::domain_error);
}
