#include "timescales/random.hpp"

#include <cmath>
#include <stdexcept>

#include "detail.hpp"

namespace timescales::rng {

namespace {

int poisson_inversion(Stream& gen, double mean) {
  const double u = gen.next_double();
  double p = std::exp(-mean);
  double cdf = p;
  int k = 0;
  while (u > cdf) {
    ++k;
    p *= mean / k;
    cdf += p;
    if (p < 1e-300) break;  // cdf has numerically saturated
  }
  return k;
}

// Hormann (1993), transformed rejection with squeeze (PTRS), mean >= 10.
int poisson_ptrs(Stream& gen, double mean) {
  const double b = 0.931 + 2.53 * std::sqrt(mean);
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  const double log_mean = std::log(mean);
  for (;;) {
    const double u = gen.next_double() - 0.5;
    const double v = gen.next_double();
    const double us = 0.5 - std::abs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<int>(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
    const double rhs = kf * log_mean - mean - detail::log_factorial(kf);
    if (lhs <= rhs) return static_cast<int>(kf);
  }
}

}  // namespace

int poisson(Stream& gen, double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean))
    throw std::domain_error("poisson: mean must be nonnegative and finite");
  if (mean == 0.0) return 0;
  if (mean < 10.0) return poisson_inversion(gen, mean);
  return poisson_ptrs(gen, mean);
}

int skellam(Stream& gen, double x) {
  const double half = 0.5 * x;
  const int plus = poisson(gen, half);
  const int minus = poisson(gen, half);
  return plus - minus;
}

}  // namespace timescales::rng
