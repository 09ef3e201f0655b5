#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>

#include "seqmine/errors.hpp"

namespace seqmine {

// SplitMix64 (Steele, Lea, Flood 2014). Used for seed expansion and for
// deriving independent sub-streams from (seed, stream) pairs.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t s) : state(s) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
};

// Derive a sub-seed for an independent stream. Deterministic and platform
// independent; every piece of randomness in the toolkit flows from one root
// seed through this function.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  SplitMix64 sm(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
  sm.next();
  return sm.next();
}

// xoshiro256** 1.0 (Blackman, Vigna 2018). All sampling helpers are written
// out by hand so that results are bit-identical across platforms and
// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& word : state_) word = sm.next();
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
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n). Rejection sampling keeps it unbiased.
  std::size_t uniform_index(std::size_t n) {
    if (n == 0) throw NumericalFailure("uniform_index: empty range");
    const std::uint64_t bound = n;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return static_cast<std::size_t>(v % bound);
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Exponential with the given mean via inversion.
  double exponential(double mean) { return -mean * std::log1p(-next_double()); }

  // Standard normal via Box-Muller; the spare value is cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  // Number of failures before the first success, P(success) = p.
  std::uint64_t geometric_failures(double p) {
    if (!(p > 0.0) || p > 1.0) throw NumericalFailure("geometric_failures: p outside (0,1]");
    if (p >= 1.0) return 0;
    const double u = next_double();
    return static_cast<std::uint64_t>(std::floor(std::log1p(-u) / std::log1p(-p)));
  }

  // Index drawn proportionally to the (nonnegative) weights.
  std::size_t categorical(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0)) throw NumericalFailure("categorical: nonpositive total weight");
    const double target = next_double() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      acc += weights[i];
      if (target < acc) return i;
    }
    return weights.size() - 1;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::array<std::uint64_t, 4> state_{};
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace seqmine
