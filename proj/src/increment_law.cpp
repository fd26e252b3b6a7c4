#include "timescales/increment_law.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "detail.hpp"
#include "timescales/bessel.hpp"
#include "timescales/io.hpp"
#include "timescales/random.hpp"

namespace timescales {

namespace {

void check_x(double x) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw std::domain_error("increment law: theta*delta must be positive and finite, got " +
                            std::to_string(x));
}

int abs_k(int k) {
  // |INT_MIN| does not fit in int
  if (k == std::numeric_limits<int>::min())
    throw std::domain_error("increment law: |k| out of range");
  return k < 0 ? -k : k;
}

}  // namespace

long long SamplingScheme::count() const {
  // floor(T/delta), tolerating the binary representation of grid steps like
  // 0.01 where T/delta lands a few ulp under an integer
  const double q = horizon / step;
  const double r = std::round(q);
  if (std::abs(q - r) < 1e-9 * std::max(1.0, q)) return static_cast<long long>(r);
  return static_cast<long long>(std::floor(q));
}

void validate(const ModelParams& params) {
  if (!(params.theta > 0.0) || !std::isfinite(params.theta))
    throw std::domain_error("ModelParams: theta must be positive and finite");
}

void validate(const SamplingScheme& scheme) {
  if (!(scheme.step > 0.0) || !std::isfinite(scheme.step))
    throw std::domain_error("SamplingScheme: step must be positive and finite");
  if (!(scheme.horizon >= scheme.step) || !std::isfinite(scheme.horizon))
    throw std::domain_error("SamplingScheme: need 0 < step <= horizon");
}

double pmf(double x, int k) {
  check_x(x);
  return std::exp(-x + bessel::log_bessel_i(abs_k(k), x));
}

std::vector<double> log_pmf_table(double x, int k_max) {
  check_x(x);
  if (k_max < 0) throw std::domain_error("log_pmf_table: k_max must be >= 0");
  std::vector<double> table(static_cast<std::size_t>(k_max) + 1);
  table[0] = -x + bessel::log_bessel_i(0, x);
  if (k_max > 0) {
    const std::vector<double> r = bessel::bessel_ratio_table(k_max - 1, x);
    for (int k = 1; k <= k_max; ++k)
      table[static_cast<std::size_t>(k)] =
          table[static_cast<std::size_t>(k) - 1] + std::log(r[static_cast<std::size_t>(k) - 1]);
  }
  return table;
}

double walk_kernel(int m, int k) {
  if (m < 0) throw std::domain_error("walk_kernel: m must be >= 0");
  const int a = abs_k(k);
  if (a > m || ((m - a) & 1)) return 0.0;
  const int up = (m + a) / 2;
  const double log_p = detail::log_factorial(m) - detail::log_factorial(up) -
                       detail::log_factorial(m - up) - m * std::log(2.0);
  return std::exp(log_p);
}

double pmf_oracle(double x, int k, int m_max) {
  check_x(x);
  if (m_max < 0) throw std::domain_error("pmf_oracle: m_max must be >= 0");
  if (x > 700.0)
    throw std::domain_error("pmf_oracle: x too large for the direct mixture sum");

  // Certify the Poisson tail analytically: beyond m_max the weights are
  // dominated by a geometric sequence with ratio x/(m_max+2).
  const double rho = x / (m_max + 2.0);
  double tail_bound = std::numeric_limits<double>::infinity();
  if (rho < 1.0) {
    const double log_w_next = -x + (m_max + 1.0) * std::log(x) - detail::log_factorial(m_max + 1);
    tail_bound = std::exp(log_w_next) / (1.0 - rho);
  }
  if (!(tail_bound < 1e-14))
    throw std::runtime_error("pmf_oracle: Poisson tail beyond m_max not below 1e-14 (bound " +
                             io::format_g17(tail_bound) + "), increase m_max");

  const int a = abs_k(k);
  double weight = std::exp(-x);  // e^{-x} x^m / m!, updated in m
  double sum = 0.0;
  for (int m = 0; m <= m_max; ++m) {
    if (m > 0) weight *= x / m;
    if (m >= a && ((m - a) & 1) == 0) sum += walk_kernel(m, k) * weight;
  }
  return sum;
}

IncrementSeries sample_increments(const ModelParams& params,
                                  const SamplingScheme& scheme,
                                  std::uint64_t seed) {
  validate(params);
  validate(scheme);
  const long long n = scheme.count();
  const double x = params.theta * scheme.step;
  IncrementSeries series;
  series.scheme = scheme;
  series.values.resize(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) {
    rng::Stream stream(rng::stream_key(seed, 0, static_cast<std::uint64_t>(i)));
    series.values[static_cast<std::size_t>(i)] = rng::skellam(stream, x);
  }
  return series;
}

double score(const ModelParams& params, double step, int k) {
  validate(params);
  if (!(step > 0.0) || !std::isfinite(step))
    throw std::domain_error("score: step must be positive and finite");
  const double x = params.theta * step;
  const int a = abs_k(k);
  const double h = bessel::bessel_ratio(a, x);
  return step * (h + a / x - 1.0);
}

double log_pmf_hessian(const ModelParams& params, double step, int k) {
  validate(params);
  if (!(step > 0.0) || !std::isfinite(step))
    throw std::domain_error("log_pmf_hessian: step must be positive and finite");
  const double x = params.theta * step;
  const int a = abs_k(k);
  const double h = bessel::bessel_ratio(a, x);
  const double h2 = bessel::bessel_ratio2(a, x);
  return step * step * (h2 - h * h) + (step / params.theta) * h -
         a / (params.theta * params.theta);
}

Moments central_moments(double x) {
  check_x(x);
  return {x, x * (1.0 + 3.0 * x)};
}

double qv_summand_variance(double x) {
  check_x(x);
  return x * (1.0 + 2.0 * x);
}

void write_increments_csv(std::ostream& out, const IncrementSeries& series) {
  out << "index,increment\n";
  for (std::size_t i = 0; i < series.values.size(); ++i)
    out << i << ',' << series.values[i] << '\n';
}

std::vector<int> read_increments_csv(std::istream& in) {
  std::vector<int> values;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {  // "index,increment"
      header_seen = true;
      if (line.find("index") != std::string::npos) continue;
    }
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error("increments csv: malformed row: " + line);
    values.push_back(std::stoi(line.substr(comma + 1)));
  }
  return values;
}

}  // namespace timescales
