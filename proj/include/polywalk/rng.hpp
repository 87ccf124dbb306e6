// Counter-based random streams.
//
// Draw k (k = 0, 1, ...) of stream s under seed S is
//
//   key  = mix(S ^ mix(s + G))
//   u_k  = mix(key + (k + 1) G)
//
// with G = 0x9e3779b97f4a7c15 and mix the SplitMix64 finalizer. A stream is
// therefore SplitMix64 started from `key`, and any draw of any stream can be
// recomputed from (seed, stream, k) alone. Simulations key one stream per
// trial, so results do not depend on how trials are scheduled.
//
// Uniforms use the top 53 bits: u = (x >> 11) * 2^-53 in [0, 1). A Bernoulli(p)
// step succeeds iff u < p.
#pragma once

#include <cstdint>
#include <limits>

namespace polywalk::sim {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class CounterRng {
 public:
  using result_type = std::uint64_t;

  constexpr CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(mix64(seed ^ mix64(stream + kGolden))) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() { return mix64(key_ + (++counter_) * kGolden); }

  /// Uniform on [0, 1) with 53 random bits.
  constexpr double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  constexpr bool bernoulli(double p) { return uniform() < p; }

  constexpr std::uint64_t draws() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace polywalk::sim
