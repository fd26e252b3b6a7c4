#pragma once

// L2 distance between the jittered increment density (increment plus an
// independent uniform on [-1/2, 1/2]) and its Gaussian limit N(0, theta*delta),
// computed two independent ways: cell-by-cell quadrature in real space and
// the Plancherel integral of characteristic functions.
namespace timescales::gaussianization {

struct JitterDistance {
  double value = 0.0;
  bool small_x = false;  // theta * delta < 0.5: defined but O(1), flagged
};

// sum_k integral over [k-1/2, k+1/2] of (pmf(x,k) - N(0,x) density)^2,
// Gauss-Legendre per cell, lattice truncated with tail below 1e-14.
JitterDistance l2_distance_direct(double theta, double delta);

// (2 pi)^-1 integral of (e^{-x(1-cos xi)} sinc(xi/2) - e^{-x xi^2/2})^2,
// integrated harmonic by harmonic with an analytic bound added for the
// truncated tail.
JitterDistance l2_distance_spectral(double theta, double delta);

}  // namespace timescales::gaussianization
