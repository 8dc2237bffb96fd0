// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "npdcat/math.hpp"

namespace npdcat {

// Reproducible, parallel-safe random streams.
//
// Every stream is derived by hashing (master_seed, purpose, replicate,
// subject) through a SplitMix64 avalanche, so any (replicate, subject) cell
// can be generated independently of execution order or thread count.
// Normal deviates use the inverse CDF, making each draw a pure function of
// one uniform from the stream.

enum class StreamPurpose : std::uint64_t {
  simulation = 1,         // parameter + outcome draws for one (replicate, subject)
  jitter = 2,             // pd jittering, keyed by (replicate, observation index)
  cdf = 3,                // Monte Carlo draws for the marginal CDF
  bands = 4,              // percentile-band null simulations
  calibration = 5,        // H0 replicates for null distributions
  calibration_jitter = 6, // jitter inside calibration replicates
  evaluation = 7,         // replicates evaluated against a calibrated test
  evaluation_jitter = 8,  // jitter inside evaluation replicates
};

// Identifies one substream: which purpose, which replicate, which unit.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t replicate = 0;
  std::uint64_t subject = 0;
  StreamPurpose purpose = StreamPurpose::simulation;
};

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// xoshiro256++ seeded from a SeedSpec.
class Stream {
 public:
  explicit Stream(const SeedSpec& spec) {
    std::uint64_t h = spec.master_seed;
    (void)splitmix64(h);
    h ^= static_cast<std::uint64_t>(spec.purpose) * 0x9E3779B97F4A7C15ULL;
    (void)splitmix64(h);
    h ^= spec.replicate;
    (void)splitmix64(h);
    h ^= spec.subject;
    for (auto& s : state_) s = splitmix64(h);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on the open interval (0,1); safe as a normal_quantile argument.
  double uniform_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform on (lo, hi), open at both ends.
  double uniform_open(double lo, double hi) {
    return lo + uniform_open() * (hi - lo);
  }

  double normal(double mean = 0.0, double sd = 1.0) {
    return mean + sd * normal_quantile(uniform_open());
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t state_[4];
};

}  // namespace npdcat
