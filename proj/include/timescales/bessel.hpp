#pragma once

#include <vector>

// Modified Bessel functions of the first kind at integer order, evaluated in
// log scale, plus the neighbour ratios I_{nu+1}/I_nu that the increment
// likelihood is built from.  Ratios are computed by a continued fraction
// seeded above the transition order and recurred downward, never by dividing
// two separately evaluated (and possibly overflowed) function values.
namespace timescales::bessel {

// log I_nu(x).  Power series for x <= 30, asymptotic I_0 plus accumulated
// log-ratios above.  log_bessel_i(0, 0) = 0 by continuity; nu >= 1 at x = 0
// is rejected.
double log_bessel_i(int nu, double x);

// I_{nu+1}(x) / I_nu(x), strictly inside (0, 1) for x > 0.
double bessel_ratio(int nu, double x);

// I_{nu+2}(x) / I_nu(x) = bessel_ratio(nu, x) * bessel_ratio(nu + 1, x).
double bessel_ratio2(int nu, double x);

// r[j] = I_{j+1}(x) / I_j(x) for j = 0..nu_max, one continued-fraction seed
// followed by downward recurrence.
std::vector<double> bessel_ratio_table(int nu_max, double x);

}  // namespace timescales::bessel
