#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace auditcov {

/// SplitMix64 finalizer. Used to expand seeds and to derive per-replicate
/// streams; a bijection on 64-bit words.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seed for replicate `stream` of a run started from `master`. Depends only on
/// the pair, so replicates can be scheduled in any order on any thread.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept {
  return splitmix64_mix(master + 0x9E3779B97F4A7C15ULL * (stream + 1));
}

/// xoshiro256** 1.0 (Blackman & Vigna), state expanded from one 64-bit seed
/// with SplitMix64. All variates below are built from its output with
/// explicitly specified transforms so streams are identical on every platform
/// that implements IEEE-754 double arithmetic and a faithful libm.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept { return next(); }
  std::uint64_t next() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform on (0, 1).
  double uniform_open() noexcept;
  /// Standard normal via the Marsaglia polar method (one variate per call).
  double normal() noexcept;
  double normal(double mean, double sd) noexcept { return mean + sd * normal(); }
  /// Gamma(shape, 1) via Marsaglia & Tsang; shape < 1 uses the U^(1/shape) boost.
  /// shape == 0 returns 0.
  double gamma(double shape) noexcept;
  /// Chi-square with `df` degrees of freedom, as 2 * Gamma(df / 2).
  double chi_square(double df) noexcept { return 2.0 * gamma(0.5 * df); }

 private:
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace auditcov
