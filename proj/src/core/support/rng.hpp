#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace semiflow {

// Deterministic RNG wrapper. std::mt19937_64 sequences are pinned by the
// standard; the uniform mapping below avoids std::uniform_real_distribution,
// whose output is implementation defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Log-uniform over [lo, hi], both positive.
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }

  // Standard normal via Box-Muller; deterministic given the seed.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    double u2 = uniform01();
    while (u1 <= 1e-300) u1 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  std::uint64_t next_u64() { return eng_(); }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Halton low-discrepancy value: index i (1-based) in the base-b radical
// inverse. Bases are taken from the first primes per dimension.
inline double halton(std::uint64_t i, unsigned base) {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

inline unsigned halton_base(int dim_index) {
  static const unsigned primes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                                    31, 37, 41, 43, 47, 53, 59, 61, 67, 71};
  if (dim_index < 20) return primes[dim_index];
  // Fallback for very high dimension: odd stride, not prime but adequate.
  return 71u + 2u * static_cast<unsigned>(dim_index - 19);
}

}  // namespace semiflow
