#include "timescales/nonhomogeneous.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "timescales/fisher.hpp"
#include "timescales/io.hpp"
#include "timescales/random.hpp"

namespace timescales::nonhomogeneous {

namespace {

constexpr double kQuadTol = 1e-10;
constexpr int kMaxDepth = 40;

template <class F>
double adaptive_step(F& f, double a, double b, double fa, double fm, double fb,
                     double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double refined = left + right;
  if (std::abs(refined - whole) <= 15.0 * tol)
    return refined + (refined - whole) / 15.0;
  if (depth <= 0)
    throw std::runtime_error("nonhomogeneous: quadrature did not converge, residual " +
                             io::format_g17(std::abs(refined - whole) / 15.0));
  return adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <class F>
double adaptive_simpson(F f, double a, double b, double tol) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_step(f, a, b, fa, fm, fb, whole, tol, kMaxDepth);
}

void check_model(const IntensityModel& model) {
  if (!model.rate || !model.rate_dtheta)
    throw std::domain_error("IntensityModel: rate and rate_dtheta must be callable");
}

double positive_rate(const IntensityModel& model, double theta, double s) {
  const double lambda = model.rate(theta, s);
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::domain_error("IntensityModel: rate must be positive, got " +
                            io::format_g17(lambda) + " at s=" + io::format_g17(s));
  return lambda;
}

}  // namespace

IntensityModel builtin_intensity(const std::string& name) {
  IntensityModel model;
  if (name == "constant") {
    model.rate = [](double theta, double) { return theta; };
    model.rate_dtheta = [](double, double) { return 1.0; };
  } else if (name == "linear") {
    model.rate = [](double theta, double s) { return theta * (1.0 + s); };
    model.rate_dtheta = [](double, double s) { return 1.0 + s; };
  } else if (name == "sine") {
    model.rate = [](double theta, double s) {
      return theta * (1.0 + 0.5 * std::sin(2.0 * M_PI * s));
    };
    model.rate_dtheta = [](double, double s) {
      return 1.0 + 0.5 * std::sin(2.0 * M_PI * s);
    };
  } else {
    throw std::domain_error("builtin_intensity: unknown model '" + name +
                            "' (expected constant, linear or sine)");
  }
  model.sup_bound = std::numeric_limits<double>::infinity();
  return model;
}

double cumulative_intensity(const IntensityModel& model, double theta, double t,
                            double horizon) {
  check_model(model);
  if (!(horizon > 0.0) || !(t >= 0.0) || !(t <= horizon))
    throw std::domain_error("cumulative_intensity: need 0 <= t <= horizon");
  if (t == 0.0) return 0.0;
  // integrate in the normalised coordinate s = u / T
  const double value = adaptive_simpson(
      [&](double s) { return positive_rate(model, theta, s); }, 0.0, t / horizon,
      kQuadTol);
  return horizon * value;
}

IncrementSeries sample_increments_nh(const IntensityModel& model, double theta,
                                     const SamplingScheme& scheme,
                                     std::uint64_t seed) {
  check_model(model);
  validate(scheme);
  const long long n = scheme.count();
  IncrementSeries series;
  series.scheme = scheme;
  series.values.resize(static_cast<std::size_t>(n));
  const double t = scheme.horizon;
  for (long long i = 0; i < n; ++i) {
    const double s0 = (static_cast<double>(i) * scheme.step) / t;
    const double s1 = (static_cast<double>(i + 1) * scheme.step) / t;
    const double mean = t * adaptive_simpson(
                                [&](double s) { return positive_rate(model, theta, s); },
                                s0, s1, 1e-14);
    rng::Stream stream(rng::stream_key(seed, 0, static_cast<std::uint64_t>(i)));
    series.values[static_cast<std::size_t>(i)] = rng::skellam(stream, mean);
  }
  return series;
}

double info_nonhomog(Regime regime, const IntensityModel& model, double theta,
                     const SamplingScheme& scheme) {
  check_model(model);
  validate(scheme);
  const double t = scheme.horizon;
  const double delta = scheme.step;
  switch (regime) {
    case Regime::Microscopic:
      // T int (dlog lambda)^2 lambda ds = T int (dlambda)^2 / lambda ds
      return t * adaptive_simpson(
                     [&](double s) {
                       const double lambda = positive_rate(model, theta, s);
                       const double dl = model.rate_dtheta(theta, s);
                       return dl * dl / lambda;
                     },
                     0.0, 1.0, kQuadTol);
    case Regime::Intermediate:
      // T delta int (dlog lambda)^2 lambda^2 H ds with H = psi(lambda delta)
      return t * delta *
             adaptive_simpson(
                 [&](double s) {
                   const double lambda = positive_rate(model, theta, s);
                   const double dl = model.rate_dtheta(theta, s);
                   return dl * dl * fisher::psi(lambda * delta);
                 },
                 0.0, 1.0, kQuadTol);
    case Regime::Macroscopic:
      return t / (2.0 * delta) *
             adaptive_simpson(
                 [&](double s) {
                   const double lambda = positive_rate(model, theta, s);
                   const double dl = model.rate_dtheta(theta, s);
                   return (dl / lambda) * (dl / lambda);
                 },
                 0.0, 1.0, kQuadTol);
  }
  throw std::domain_error("info_nonhomog: unknown regime");
}

}  // namespace timescales::nonhomogeneous
