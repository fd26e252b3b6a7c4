#include "timescales/bessel.hpp"

#include "detail.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace timescales::bessel {

namespace {

constexpr double kSeriesCutoff = 30.0;
constexpr double kTermTol = 1e-18;
constexpr int kMaxSeriesTerms = 500;

void check_domain(int nu, double x) {
  if (nu < 0)
    throw std::domain_error("bessel: order must be nonnegative, got " + std::to_string(nu));
  if (!(x > 0.0) || !std::isfinite(x))
    throw std::domain_error("bessel: argument must be positive and finite, got " +
                            std::to_string(x));
}

// log of (x/2)^nu / nu! * sum_m (x^2/4)^m nu! / (m! (nu+m)!), x <= ~30 so the
// scaled sum stays below e^{x^2/4} and cannot overflow.
double log_series(int nu, double x) {
  const double q = 0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int m = 1; m <= kMaxSeriesTerms; ++m) {
    term *= q / (static_cast<double>(m) * (static_cast<double>(nu) + m));
    sum += term;
    if (term < kTermTol * sum) break;
  }
  return nu * std::log(0.5 * x) - detail::log_factorial(nu) + std::log(sum);
}

// log I_0(x) from the large-argument expansion
// I_0(x) ~ e^x / sqrt(2 pi x) [1 + 1/(8x) + 9/(2!(8x)^2) + ...].
double log_i0_asymptotic(double x) {
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < 64; ++k) {
    const double next =
        term * ((2.0 * k + 1.0) * (2.0 * k + 1.0)) / (8.0 * x * (k + 1.0));
    if (next >= term) break;  // divergent tail of the asymptotic series
    term = next;
    sum += term;
    if (term < kTermTol * sum) break;
  }
  return x + std::log(sum) - 0.5 * std::log(2.0 * M_PI * x);
}

// Continued fraction for r_nu = I_{nu+1}(x)/I_nu(x) (modified Lentz):
// r_nu = 1 / (2(nu+1)/x + 1 / (2(nu+2)/x + ...)).
double ratio_continued_fraction(int nu, double x) {
  constexpr double tiny = 1e-300;
  double f = tiny;
  double c = f;
  double d = 0.0;
  for (int i = 1; i <= 20000; ++i) {
    const double b = 2.0 * (static_cast<double>(nu) + i) / x;
    d = b + d;
    if (d == 0.0) d = tiny;
    c = b + 1.0 / c;
    if (c == 0.0) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 4.0 * std::numeric_limits<double>::epsilon()) return f;
  }
  throw std::runtime_error("bessel: ratio continued fraction did not converge at nu=" +
                           std::to_string(nu) + ", x=" + std::to_string(x));
}

// The fraction converges fast once the order dominates the argument; seed
// there and recur downward with r_{j-1} = 1 / (2j/x + r_j).
int seed_order(int nu, double x) {
  const int above_x = static_cast<int>(std::ceil(x)) + 8;
  return nu > above_x ? nu : above_x;
}

}  // namespace

double log_bessel_i(int nu, double x) {
  if (x == 0.0 && nu == 0) return 0.0;  // I_0(0) = 1 by the series
  check_domain(nu, x);
  if (x <= kSeriesCutoff) return log_series(nu, x);
  double value = log_i0_asymptotic(x);
  if (nu > 0) {
    const std::vector<double> r = bessel_ratio_table(nu - 1, x);
    for (double rj : r) value += std::log(rj);
  }
  return value;
}

double bessel_ratio(int nu, double x) {
  check_domain(nu, x);
  const int seed = seed_order(nu, x);
  double r = ratio_continued_fraction(seed, x);
  for (int j = seed; j > nu; --j) r = 1.0 / (2.0 * j / x + r);
  return r;
}

double bessel_ratio2(int nu, double x) {
  check_domain(nu, x);
  const int seed = seed_order(nu + 1, x);
  double r = ratio_continued_fraction(seed, x);
  for (int j = seed; j > nu + 1; --j) r = 1.0 / (2.0 * j / x + r);
  const double r_next = r;                       // r_{nu+1}
  const double r_nu = 1.0 / (2.0 * (nu + 1) / x + r_next);
  return r_nu * r_next;
}

std::vector<double> bessel_ratio_table(int nu_max, double x) {
  check_domain(nu_max, x);
  const int seed = seed_order(nu_max, x);
  std::vector<double> table(static_cast<std::size_t>(nu_max) + 1);
  double r = ratio_continued_fraction(seed, x);
  for (int j = seed; j > nu_max; --j) r = 1.0 / (2.0 * j / x + r);
  for (int j = nu_max; j >= 1; --j) {
    table[static_cast<std::size_t>(j)] = r;
    r = 1.0 / (2.0 * j / x + r);
  }
  table[0] = r;
  return table;
}

}  // namespace timescales::bessel
