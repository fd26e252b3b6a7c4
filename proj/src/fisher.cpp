#include "timescales/fisher.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "timescales/bessel.hpp"
#include "timescales/io.hpp"

namespace timescales::fisher {

namespace {

void check_x(double x) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw std::domain_error("fisher: x must be positive and finite, got " +
                            std::to_string(x));
}

// sum over k in Z of pmf(x,k) f(|k|, r_{|k|}) with the adaptive truncation
// |k| <= ceil(x + 12 sqrt(x) + 25), extended until two consecutive terms
// fall below 1e-16 of the accumulated sum.
template <class F>
double expect_over_law(double x, F f) {
  long long cap = static_cast<long long>(std::ceil(x + 12.0 * std::sqrt(x) + 25.0));
  for (;;) {
    const int table_max = static_cast<int>(cap) + 2;
    const std::vector<double> r = bessel::bessel_ratio_table(table_max, x);
    double log_p = -x + bessel::log_bessel_i(0, x);
    double sum = std::exp(log_p) * f(0, r[0]);
    int small_run = 0;
    for (int k = 1; k <= table_max; ++k) {
      log_p += std::log(r[static_cast<std::size_t>(k) - 1]);
      const double term = 2.0 * std::exp(log_p) * f(k, r[static_cast<std::size_t>(k)]);
      sum += term;
      if (k >= cap && std::abs(term) < 1e-16 * std::abs(sum)) {
        if (++small_run >= 2) return sum;
      } else {
        small_run = 0;
      }
    }
    cap *= 2;
    if (cap > 50'000'000)
      throw std::runtime_error("fisher: expectation truncation failed at x=" +
                               io::format_g17(x));
  }
}

}  // namespace

double psi(double x) {
  check_x(x);
  return expect_over_law(x, [x](int k, double h) {
    const double g = h + k / x - 1.0;
    return g * g;
  });
}

double total_information(const ModelParams& params, const SamplingScheme& scheme) {
  validate(params);
  validate(scheme);
  const double n = static_cast<double>(scheme.count());
  return n * scheme.step * scheme.step * psi(params.theta * scheme.step);
}

double limit_information(Regime regime, const ModelParams& params,
                         const SamplingScheme& scheme) {
  validate(params);
  validate(scheme);
  switch (regime) {
    case Regime::Microscopic:
      return scheme.horizon / params.theta;
    case Regime::Macroscopic:
      return scheme.horizon / scheme.step / (2.0 * params.theta * params.theta);
    case Regime::Intermediate:
      return scheme.horizon * scheme.step * psi(params.theta * scheme.step);
  }
  throw std::domain_error("limit_information: unknown regime");
}

double deficiency_ratio(double x) {
  check_x(x);
  return psi(x) * (2.0 * x * x + x);
}

DeficiencyMax max_deficiency(double x_lo, double x_hi, double tol) {
  if (!(x_lo > 0.0) || !(x_hi > x_lo))
    throw std::domain_error("max_deficiency: need 0 < x_lo < x_hi");
  if (!(tol > 0.0)) throw std::domain_error("max_deficiency: tol must be positive");

  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = x_lo, b = x_hi;
  double fa = deficiency_ratio(a), fb = deficiency_ratio(b);
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = deficiency_ratio(x1), f2 = deficiency_ratio(x2);

  while (b - a > tol) {
    const double noise = 1e-10 * std::max(std::abs(fa), std::abs(fb));
    if (std::max(f1, f2) + noise < std::min(fa, fb)) {
      const double xm = f1 < f2 ? x2 : x1;
      const double fm = std::max(f1, f2);
      throw std::runtime_error(
          "max_deficiency: bracket fails the unimodality test at triple x=(" +
          io::format_g17(a) + ", " + io::format_g17(xm) + ", " + io::format_g17(b) +
          "), f=(" + io::format_g17(fa) + ", " + io::format_g17(fm) + ", " +
          io::format_g17(fb) + ")");
    }
    if (f1 < f2) {
      a = x1;
      fa = f1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = deficiency_ratio(x2);
    } else {
      b = x2;
      fb = f2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = deficiency_ratio(x1);
    }
  }

  DeficiencyMax out;
  out.x_star = 0.5 * (a + b);
  out.ratio_star = deficiency_ratio(out.x_star);
  // interior search never beat an end point: report the end instead
  if (fb > out.ratio_star) {
    out.x_star = x_hi;
    out.ratio_star = fb;
    out.boundary = true;
  }
  if (fa > out.ratio_star) {
    out.x_star = x_lo;
    out.ratio_star = fa;
    out.boundary = true;
  }
  const double edge = 2.0 * tol + 1e-12 * (x_hi - x_lo);
  if (out.x_star - x_lo < edge || x_hi - out.x_star < edge) out.boundary = true;
  return out;
}

std::vector<InfoCurvePoint> deficiency_curve(double x_lo, double x_hi, int points,
                                             bool log_spaced) {
  if (!(x_lo > 0.0) || !(x_hi > x_lo))
    throw std::domain_error("deficiency_curve: need 0 < x_lo < x_hi");
  if (points < 2) throw std::domain_error("deficiency_curve: need at least 2 points");
  std::vector<InfoCurvePoint> curve;
  curve.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / (points - 1);
    const double x = log_spaced ? x_lo * std::pow(x_hi / x_lo, t)
                                : x_lo + t * (x_hi - x_lo);
    const double p = psi(x);
    curve.push_back({x, p, p * (2.0 * x * x + x)});
  }
  return curve;
}

}  // namespace timescales::fisher
