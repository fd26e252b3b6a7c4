#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "timescales/increment_law.hpp"

// Time-dependent jump intensity lambda(theta, s/T): cumulative intensity,
// sampling, and the three regime information formulas.
namespace timescales::nonhomogeneous {

struct IntensityModel {
  // lambda(theta, s) > 0 for s in [0,1]
  std::function<double(double, double)> rate;
  // d/dtheta lambda(theta, s)
  std::function<double(double, double)> rate_dtheta;
  // declared upper bound of lambda over the parameter set and [0,1]
  double sup_bound = 0.0;
};

// constant: theta; linear: theta (1+s); sine: theta (1 + 0.5 sin 2 pi s)
IntensityModel builtin_intensity(const std::string& name);

// Lambda_T(t, theta) = integral over [0, t] of lambda(theta, s/T) ds,
// adaptive quadrature, monotone nondecreasing in t.
double cumulative_intensity(const IntensityModel& model, double theta,
                            double t, double horizon);

// Increment i carries a Poisson(Lambda_i) count of signs, realised as a
// difference of two Poissons with means Lambda_i / 2; independent across i.
IncrementSeries sample_increments_nh(const IntensityModel& model, double theta,
                                     const SamplingScheme& scheme,
                                     std::uint64_t seed);

// Regime information:
//   micro         T  int (dlog lambda)^2 lambda ds
//   intermediate  T delta  int (dlog lambda)^2 lambda^2 psi(lambda delta) ds
//   macro         (T / (2 delta))  int (dlog lambda)^2 ds
double info_nonhomog(Regime regime, const IntensityModel& model, double theta,
                     const SamplingScheme& scheme);

}  // namespace timescales::nonhomogeneous
