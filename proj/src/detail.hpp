#pragma once

#include <cmath>
#include <vector>

namespace timescales::detail {

// log n! for the integer orders the library uses.  Table-backed so the hot
// paths never call std::lgamma, which writes the process-global signgam and
// would race across the replica-parallel studies.
inline double log_factorial(int n) {
  static const std::vector<double> table = [] {
    std::vector<double> values(2048);
    for (std::size_t i = 0; i < values.size(); ++i)
      values[i] = std::lgamma(static_cast<double>(i) + 1.0);
    return values;
  }();
  if (n < static_cast<int>(table.size())) return table[static_cast<std::size_t>(n)];
  return std::lgamma(static_cast<double>(n) + 1.0);
}

// same, for an integer-valued double (Poisson rejection sampling)
inline double log_factorial(double n) {
  if (n >= 0.0 && n < 2047.0) return log_factorial(static_cast<int>(n));
  return std::lgamma(n + 1.0);
}

}  // namespace timescales::detail
