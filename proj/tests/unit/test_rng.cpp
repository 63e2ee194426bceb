#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "auditcov/rng.hpp"

using namespace auditcov;

namespace {

// Reference xoshiro256** and SplitMix64 transcribed from the published
// algorithms, used to pin the library's raw stream.
struct ReferenceXoshiro {
  std::uint64_t s[4];

  explicit ReferenceXoshiro(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& w : s) {
      std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
      z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
      z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
      w = z ^ (z >> 31);
    }
  }

  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s[1] * 5, 7) * 9;
    const std::uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl(s[3], 45);
    return result;
  }
};

struct Moments {
  double mean = 0.0;
  double var = 0.0;
};

template <typename Draw>
Moments moments(Draw draw, int n) {
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = draw();
    s += x;
    s2 += x * x;
  }
  const double mean = s / n;
  return {mean, s2 / n - mean * mean};
}

}  // namespace

TEST(SplitMix, FinalizerMatchesPublishedFirstOutput) {
  // SplitMix64 from state 0 first returns 0xE220A8397B1DCDAF.
  EXPECT_EQ(splitmix64_mix(0x9E3779B97F4A7C15ULL), 0xE220A8397B1DCDAFULL);
}

TEST(SplitMix, DerivedSeedsAreDistinctAcrossStreams) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 10000; ++s) seen.insert(derive_seed(42, s));
  EXPECT_EQ(seen.size(), 10000u);
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
}

TEST(Rng, RawStreamMatchesReferenceImplementation) {
  for (std::uint64_t seed : {0ULL, 1ULL, 42ULL, 0xDEADBEEFULL}) {
    Rng rng(seed);
    ReferenceXoshiro ref(seed);
    for (int i = 0; i < 1000; ++i) ASSERT_EQ(rng.next(), ref.next());
  }
}

TEST(Rng, SameSeedGivesBitIdenticalVariates) {
  Rng a(7), b(7);
  for (int i = 0; i < 1000; ++i) {
    ASSERT_EQ(a.normal(), b.normal());
    ASSERT_EQ(a.gamma(0.7), b.gamma(0.7));
    ASSERT_EQ(a.uniform(), b.uniform());
  }
}

TEST(Rng, UniformStaysInRange) {
  Rng rng(3);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double o = rng.uniform_open();
    ASSERT_GT(o, 0.0);
    ASSERT_LT(o, 1.0);
  }
  const auto m = moments([&] { return rng.uniform(); }, 200000);
  EXPECT_NEAR(m.mean, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / 200000));
}

TEST(Rng, NormalHasUnitMomentsAndSymmetry) {
  Rng rng(11);
  const int n = 400000;
  const auto m = moments([&] { return rng.normal(); }, n);
  EXPECT_NEAR(m.mean, 0.0, 4.0 / std::sqrt(n));
  EXPECT_NEAR(m.var, 1.0, 4.0 * std::sqrt(2.0 / n));
  Rng r2(12);
  int below = 0;
  for (int i = 0; i < n; ++i) below += r2.normal() < -1.959963984540054;
  const double rate = static_cast<double>(below) / n;
  EXPECT_NEAR(rate, 0.025, 4.0 * std::sqrt(0.025 * 0.975 / n));
}

TEST(Rng, GammaAndChiSquareMoments) {
  const int n = 200000;
  for (double shape : {0.3, 1.0, 2.5, 40.0}) {
    Rng rng(static_cast<std::uint64_t>(shape * 100));
    const auto m = moments([&] { return rng.gamma(shape); }, n);
    EXPECT_NEAR(m.mean, shape, 5.0 * std::sqrt(shape / n)) << "shape " << shape;
    EXPECT_NEAR(m.var / shape, 1.0, 0.05) << "shape " << shape;
  }
  Rng rng(99);
  const auto c = moments([&] { return rng.chi_square(199.0); }, n);
  EXPECT_NEAR(c.mean, 199.0, 5.0 * std::sqrt(2.0 * 199.0 / n));
  EXPECT_NEAR(c.var / (2.0 * 199.0), 1.0, 0.03);
  EXPECT_EQ(rng.gamma(0.0), 0.0);
}
