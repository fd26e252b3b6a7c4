#pragma once

#include <cstdint>

// Counter-based random streams.  Every increment of every replica gets its
// own stream keyed by (seed, replica, index), so simulation output does not
// depend on execution order or thread count.
namespace timescales::rng {

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t stream_key(std::uint64_t seed, std::uint64_t replica,
                                std::uint64_t index) {
  return mix64(mix64(mix64(seed) ^ replica) ^ index);
}

// splitmix64 stream; statistically solid and trivially reproducible.
class Stream {
 public:
  explicit Stream(std::uint64_t key) : state_(key) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1) with 53 random bits
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

// Poisson draw: sequential inversion for small means, Hormann's PTRS
// transformed rejection for large ones.
int poisson(Stream& gen, double mean);

// Difference of two independent Poisson(x/2) draws; equal in law to a
// Poisson(x) count of independent +-1 signs.
int skellam(Stream& gen, double x);

}  // namespace timescales::rng
