#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>

namespace qotsim {

// Deterministic random stream (xoshiro256** seeded through splitmix64).
//
// Every simulation trial derives its own stream from (master seed, trial
// index), so estimates are reproducible bit-for-bit regardless of how trials
// are scheduled across worker threads.  The standard-library distributions
// are implementation-defined, which would break that guarantee; the few
// variates needed here are generated by hand instead.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) word = splitmix64(x);
  }

  // Counter-based derivation: streams for distinct trial indices are
  // decorrelated even when the master seed is small or structured.
  static Rng for_trial(std::uint64_t master_seed, std::uint64_t trial_index) {
    std::uint64_t x = master_seed;
    std::uint64_t a = splitmix64(x);
    x = a + 0x9e3779b97f4a7c15ULL * (trial_index + 1);
    return Rng(splitmix64(x));
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  int bit() { return static_cast<int>(next_u64() >> 63); }

  // Uniform integer in [0, bound) by rejection, exactly unbiased.
  int uniform_int(int bound) {
    if (bound <= 0) throw std::invalid_argument("Rng::uniform_int: bound must be positive");
    const std::uint64_t n = static_cast<std::uint64_t>(bound);
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n + 1) % n;
    std::uint64_t draw;
    do {
      draw = next_u64();
    } while (draw > limit);
    return static_cast<int>(draw % n);
  }

  // Standard normal via Box-Muller; the second variate of each pair is cached.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u = 0.0;
    do {
      u = uniform01();
    } while (u == 0.0);
    const double v = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u));
    constexpr double two_pi = 6.283185307179586476925286766559;
    spare_ = r * std::sin(two_pi * v);
    has_spare_ = true;
    return r * std::cos(two_pi * v);
  }

  std::complex<double> gaussian_complex() {
    const double re = gaussian();
    const double im = gaussian();
    return {re * 0.7071067811865476, im * 0.7071067811865476};
  }

 private:
  static std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

  std::array<std::uint64_t, 4> state_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace qotsim
