#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "auditcov/error.hpp"
#include "auditcov/hypothesis_tests.hpp"
#include "oracles.hpp"

using namespace auditcov;

namespace {

Matrix random_panel(std::mt19937_64& gen, Eigen::Index m, Eigen::Index T) {
  std::uniform_real_distribution<double> u(80.0, 120.0);
  Matrix p(m, T);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index t = 0; t < T; ++t) p(i, t) = u(gen);
  return p;
}

WeightVector shares(std::mt19937_64& gen, std::size_t m, std::string label = {}) {
  return WeightVector::create(oracle::to_vector(oracle::random_shares(gen, m)), std::move(label));
}

WeightEstimate estimate(std::mt19937_64& gen, const WeightVector& w, double scale = 1e-3) {
  return make_weight_estimate(w, oracle::random_share_covariance(gen, w.size(), scale), 500);
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an auditcov::Error";
  return ErrorCode::usage;
}

}  // namespace

TEST(ZTest, EqualWeightsGiveZeroStatistic) {
  std::mt19937_64 gen(20);
  const auto p = PriceSeries::create(random_panel(gen, 4, 6));
  const auto w = shares(gen, 4, "w");
  const auto r = z_test(p, estimate(gen, w), w);
  EXPECT_EQ(r.effect, 0.0);
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_EQ(r.p_value, 1.0);
  EXPECT_EQ(r.kind, TestKind::Z);
  EXPECT_EQ(r.period_count, 6u);
}

TEST(ZTest, MatchesDefinitionOnRandomInputs) {
  std::mt19937_64 gen(21);
  for (int rep = 0; rep < 200; ++rep) {
    const Eigen::Index m = 2 + rep % 7;
    const auto p = PriceSeries::create(random_panel(gen, m, 5));
    const auto ws = shares(gen, static_cast<std::size_t>(m));
    const auto wp = shares(gen, static_cast<std::size_t>(m));
    const auto est = estimate(gen, ws);
    const Vector pbar = p.values().rowwise().mean();
    const double effect = pbar.dot(ws.values() - wp.values());
    const double var = oracle::quadratic_form(pbar, est.covariance);
    const auto r = z_test(p, est, wp);
    EXPECT_NEAR(r.effect, effect, 1e-12 * 100.0);
    EXPECT_NEAR(r.variance / var, 1.0, 1e-9);
    EXPECT_NEAR(r.statistic, effect / std::sqrt(var), 1e-8 * std::max(1.0, std::fabs(r.statistic)));
    EXPECT_NEAR(r.p_value, 2.0 * (1.0 - oracle::cdf_simpson(std::fabs(r.statistic))), 1e-12);
    EXPECT_EQ(std::signbit(r.statistic), std::signbit(r.effect));
    EXPECT_GE(r.p_value, 0.0);
    EXPECT_LE(r.p_value, 1.0);
  }
}

TEST(ZTest, SinglePeriodEqualsOnePeriodSet) {
  std::mt19937_64 gen(22);
  const auto p = PriceSeries::create(random_panel(gen, 3, 4));
  const auto ws = shares(gen, 3);
  const auto wp = shares(gen, 3);
  const auto est = estimate(gen, ws);
  const auto r = z_test(p, est, wp, {2});
  EXPECT_NEAR(r.effect, source_effect(p, ws, wp, 2), 1e-12);
  EXPECT_EQ(r.period_first, "3");
  EXPECT_EQ(r.period_last, "3");
  EXPECT_EQ(r.period_count, 1u);
}

TEST(ZTest, PublishedStatisticMapsToPublishedPValue) {
  // m = 2 with V = s^2 [[1,-1],[-1,1]]: Z = (p1 - p2) * d / (s |p1 - p2|).
  Matrix v(2, 1);
  v << 101.0, 100.0;
  const auto p = PriceSeries::create(v);
  const auto ws = WeightVector::create(Vector{{0.5 + 0.001099, 0.5 - 0.001099}});
  const auto wp = WeightVector::create(Vector{{0.5, 0.5}});
  const double s = 0.001099 / 0.03803;
  Matrix cov(2, 2);
  cov << s * s, -s * s, -s * s, s * s;
  const auto r = z_test(p, make_weight_estimate(ws, cov, 100), wp);
  EXPECT_NEAR(r.statistic, 0.03803, 1e-9);
  EXPECT_NEAR(r.p_value, 0.970, 0.001);
}

TEST(ZTest, ZeroVarianceIsDegenerate) {
  std::mt19937_64 gen(23);
  const auto p = PriceSeries::create(random_panel(gen, 3, 2));
  const auto w = shares(gen, 3);
  const auto est = make_weight_estimate(w, Matrix::Zero(3, 3), 10);
  EXPECT_EQ(code_of([&] { z_test(p, est, w); }), ErrorCode::degenerate_test);
  EXPECT_EQ(code_of([&] { z_test(p, est, shares(gen, 4)); }), ErrorCode::dimension_mismatch);
}

TEST(UnitySlopeFit, SelfRegressionAndOlsOracle) {
  std::mt19937_64 gen(24);
  for (int rep = 0; rep < 300; ++rep) {
    const Eigen::Index m = 2 + rep % 6;
    const Eigen::Index T = 3 + rep % 20;
    const auto p = PriceSeries::create(random_panel(gen, m, T));
    const auto ws = shares(gen, static_cast<std::size_t>(m));
    const auto wp = shares(gen, static_cast<std::size_t>(m));
    const auto fit = unity_slope_fit(p, estimate(gen, ws), wp);
    EXPECT_NEAR(fit.d.dot(wp.values()), 1.0, 1e-12);
    std::vector<double> x, y;
    for (std::size_t t = 0; t < static_cast<std::size_t>(T); ++t) {
      x.push_back(weighted_index(p, wp, t));
      y.push_back(weighted_index(p, ws, t));
    }
    EXPECT_NEAR(fit.beta_hat, oracle::ols_slope(x, y), 1e-10 * std::max(1.0, std::fabs(fit.beta_hat)));
  }
}

TEST(UnitySlopeFit, ZeroResidualPanelFollowsTrendRatio) {
  std::mt19937_64 gen(25);
  std::uniform_int_distribution<int> level(80, 120);
  std::uniform_int_distribution<int> slope(-8, 8);
  for (int rep = 0; rep < 500; ++rep) {
    const Eigen::Index m = 2 + rep % 5;
    const Eigen::Index T = 3 + rep % 25;
    Vector gamma(m);
    Matrix v(m, T);
    for (Eigen::Index i = 0; i < m; ++i) {
      gamma(i) = slope(gen) / 8.0;
      const double a = level(gen);
      for (Eigen::Index t = 0; t < T; ++t) {
        v(i, t) = a + gamma(i) * (static_cast<double>(t + 1) - static_cast<double>(T + 1) / 2.0);
      }
    }
    const auto ws = shares(gen, static_cast<std::size_t>(m));
    const auto wp = shares(gen, static_cast<std::size_t>(m));
    const double den = wp.values().dot(gamma);
    if (std::fabs(den) < 1e-3) continue;
    const auto fit = unity_slope_fit(PriceSeries::create(v), estimate(gen, ws), wp);
    const double ratio = ws.values().dot(gamma) / den;
    EXPECT_NEAR(fit.beta_hat, ratio, 1e-12 * std::max(1.0, std::fabs(ratio))) << "rep " << rep;
  }
}

TEST(UnitySlopeFit, RejectsShortOrFlatSeries) {
  std::mt19937_64 gen(26);
  const auto w = shares(gen, 2);
  const auto est = estimate(gen, w);
  EXPECT_EQ(code_of([&] { unity_slope_fit(PriceSeries::create(random_panel(gen, 2, 2)), est, w); }),
            ErrorCode::insufficient_data);
  EXPECT_EQ(code_of([&] { unity_slope_fit(PriceSeries::create(Matrix::Constant(2, 5, 100.0)), est, w); }),
            ErrorCode::degenerate_test);
}

TEST(BTest, EqualWeightsGiveUnitSlope) {
  std::mt19937_64 gen(27);
  const auto p = PriceSeries::create(random_panel(gen, 4, 12));
  const auto w = shares(gen, 4);
  const auto r = b_test(p, estimate(gen, w), w);
  EXPECT_EQ(r.kind, TestKind::B);
  ASSERT_TRUE(r.slope.has_value());
  EXPECT_NEAR(*r.slope, 1.0, 1e-12);
  EXPECT_NEAR(r.statistic, 0.0, 1e-9);
  EXPECT_NEAR(r.p_value, 1.0, 1e-9);
}

TEST(BTest, InvariantUnderCommonPriceShift) {
  std::mt19937_64 gen(28);
  for (int rep = 0; rep < 50; ++rep) {
    const Matrix v = random_panel(gen, 5, 10);
    const auto ws = shares(gen, 5);
    const auto wp = shares(gen, 5);
    const auto est = estimate(gen, ws);
    const auto a = b_test(PriceSeries::create(v), est, wp);
    const auto b = b_test(PriceSeries::create((v.array() + 250.0).matrix()), est, wp);
    EXPECT_NEAR(*b.slope / *a.slope, 1.0, 1e-9);
    EXPECT_NEAR(b.variance / a.variance, 1.0, 1e-9);
  }
}

TEST(CrossGroupBattery, IdenticalWeightsEverywhere) {
  std::mt19937_64 gen(29);
  const auto p = PriceSeries::create(random_panel(gen, 3, 8));
  const auto w = shares(gen, 3);
  std::map<std::string, WeightEstimate> ests{{"1", estimate(gen, w)}, {"2", estimate(gen, w)}};
  std::map<std::string, WeightVector> proxies{{"1", w}, {"2", w}};
  std::vector<BatteryPair> pairs{{"2", "1"}, {"1", "2"}, {"1", "1"}};
  const auto out = cross_group_battery(p, ests, proxies, pairs);
  ASSERT_EQ(out.size(), 6u);
  for (const auto& r : out) {
    if (r.kind == TestKind::Z) {
      EXPECT_EQ(r.statistic, 0.0);
    } else {
      EXPECT_NEAR(*r.slope, 1.0, 1e-12);
    }
  }
  EXPECT_EQ(out[0].survey_label, "1");
  EXPECT_EQ(out[0].proxy_label, "1");
  EXPECT_EQ(out[0].kind, TestKind::Z);
  EXPECT_EQ(out[1].kind, TestKind::B);
  EXPECT_EQ(out[4].survey_label, "2");
}

TEST(CrossGroupBattery, PeriodSetsAndPerPeriodRows) {
  std::mt19937_64 gen(30);
  const auto p = PriceSeries::create(random_panel(gen, 3, 6));
  const auto ws = shares(gen, 3);
  const auto wp = shares(gen, 3);
  std::map<std::string, WeightEstimate> ests{{"g", estimate(gen, ws)}};
  std::map<std::string, WeightVector> proxies{{"h", wp}};
  BatteryOptions opt;
  opt.period_sets = {{0, 1, 2, 3, 4, 5}, {4, 5}};
  opt.per_period = true;
  const auto out = cross_group_battery(p, ests, proxies, {{"g", "h"}}, opt);
  // Full set: Z + B + 6 singles; short set: Z + 2 singles.
  ASSERT_EQ(out.size(), 11u);
  // Sorted by first period, then last period, longer sets first.
  EXPECT_EQ(out[0].period_count, 1u);
  EXPECT_EQ(out[1].period_count, 6u);
  EXPECT_EQ(out[2].kind, TestKind::B);
  EXPECT_EQ(out[2].period_count, 6u);
  EXPECT_EQ(out[8].period_count, 2u);
  EXPECT_EQ(out[8].period_first, "5");
  for (std::size_t k = 1; k < out.size(); ++k) {
    EXPECT_LE(out[k - 1].first_period, out[k].first_period);
  }
  EXPECT_EQ(code_of([&] { cross_group_battery(p, ests, proxies, {{"x", "h"}}); }),
            ErrorCode::unknown_label);
  EXPECT_EQ(code_of([&] { cross_group_battery(p, ests, proxies, {{"g", "x"}}); }),
            ErrorCode::unknown_label);
  EXPECT_EQ(code_of([&] { cross_group_battery(p, ests, proxies, {}); }),
            ErrorCode::invalid_argument);
}
