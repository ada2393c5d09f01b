#ifndef SUBORD_RANDOM_HPP
#define SUBORD_RANDOM_HPP

// Counter-based random numbers (Philox4x32-10) and the exact increment samplers
// used for subordinator paths.
//
// Each Monte Carlo path owns the stream keyed by (master seed, path index), so a
// path's draws never depend on how paths are spread over threads.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "subord/errors.hpp"

namespace subord {

/// Philox4x32 with 10 rounds (Salmon et al., SC'11). Satisfies UniformRandomBitGenerator.
class Philox4x32 {
 public:
  using result_type = std::uint32_t;
  using counter_type = std::array<std::uint32_t, 4>;
  using key_type = std::array<std::uint32_t, 2>;

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  Philox4x32() = default;

  /// Stream `stream` of generator `seed`; both 64-bit.
  Philox4x32(std::uint64_t seed, std::uint64_t stream) {
    key_ = {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    ctr_ = {0u, 0u, static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  }

  static counter_type block(counter_type ctr, key_type key) {
    constexpr std::uint32_t m0 = 0xD2511F53u, m1 = 0xCD9E8D57u;
    constexpr std::uint32_t w0 = 0x9E3779B9u, w1 = 0xBB67AE85u;
    for (int r = 0; r < 10; ++r) {
      const std::uint64_t p0 = static_cast<std::uint64_t>(m0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(m1) * ctr[2];
      const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
      const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
      key[0] += w0;
      key[1] += w1;
    }
    return ctr;
  }

  result_type operator()() {
    if (used_ == 4) {
      buffer_ = block(ctr_, key_);
      // 64-bit block counter in the low two words.
      if (++ctr_[0] == 0) ++ctr_[1];
      used_ = 0;
    }
    return buffer_[used_++];
  }

  void discard(unsigned long long n) {
    for (unsigned long long i = 0; i < n; ++i) (*this)();
  }

 private:
  key_type key_{0u, 0u};
  counter_type ctr_{0u, 0u, 0u, 0u};
  counter_type buffer_{};
  int used_ = 4;
};

/// Uniform double on the open interval (0, 1), 53 random bits.
template <class Engine>
double uniform_open(Engine& eng) {
  const std::uint64_t hi = eng(), lo = eng();
  const std::uint64_t bits = ((hi << 32) | lo) >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

template <class Engine>
double standard_exponential(Engine& eng) {
  return -std::log(uniform_open(eng));
}

/// Positive alpha-stable variable with E e^{-s S} = e^{-dt s^alpha} (Kanter's representation).
template <class Engine>
double stable_increment(double alpha, double dt, Engine& eng) {
  const double u = std::numbers::pi * uniform_open(eng);
  const double e = standard_exponential(eng);
  const double a = std::sin(alpha * u) / std::pow(std::sin(u), 1.0 / alpha);
  const double b = std::pow(std::sin((1.0 - alpha) * u) / e, (1.0 - alpha) / alpha);
  return std::pow(dt, 1.0 / alpha) * a * b;
}

/// Tempered-stable variable with E e^{-s S} = e^{-dt ((s+beta)^alpha - beta^alpha)}:
/// a stable proposal kept with probability e^{-beta S}.
template <class Engine>
double tempered_stable_increment(double alpha, double beta, double dt, Engine& eng, long max_iterations = 1000000) {
  for (long i = 0; i < max_iterations; ++i) {
    const double s = stable_increment(alpha, dt, eng);
    if (uniform_open(eng) <= std::exp(-beta * s)) return s;
  }
  throw sampler_error("tempered_stable_increment: rejection loop exceeded its iteration guard");
}

/// Poisson count with the given mean (0 for a non-positive mean).
template <class Engine>
long poisson_count(double mean, Engine& eng) {
  if (!(mean > 0.0)) return 0;
  std::poisson_distribution<long> d(mean);
  return d(eng);
}

}  // namespace subord

#endif  // SUBORD_RANDOM_HPP
