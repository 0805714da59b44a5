#pragma once

#include <cstdint>
#include <limits>

namespace heq {

/// Counter-based 64-bit generator. Output k is the SplitMix64 finalizer applied
/// to seed + (k + 1) * 0x9E3779B97F4A7C15, so any draw is addressable by
/// (seed, counter) and streams with different seeds never share state.
///
/// Integer-in-range mapping (uniform_int): Lemire's multiply-shift with
/// rejection of the biased low region, giving exactly uniform integers in
/// [lo, hi]. Real mapping (uniform01): top 53 bits scaled by 2^-53, in [0, 1).
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed, std::uint64_t counter = 0) noexcept
      : seed_(seed), counter_(counter) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  /// Uniform integer in the closed range [lo, hi]; requires lo <= hi.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  double uniform01() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }
  /// Standard normal via Box-Muller (one value per two draws).
  double normal() noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

std::uint64_t splitmix64_mix(std::uint64_t z) noexcept;

}  // namespace heq
