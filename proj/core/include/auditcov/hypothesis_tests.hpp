#pragma once

// Tests of a zero-variance proxy-weight index against survey-based weights.
//
//   Z-test: Z = D / sqrt(pbar' V pbar),    D = pbar'(w_survey - w_proxy)
//   B-test: B = (beta - 1) / sqrt(d' V d), beta = d' w_survey
//
// where pbar is the mean price vector over the chosen periods and d is the
// regression vector of the group prices on the proxy index. Proxy weights and
// prices are treated as fixed; V is the survey covariance only. p-values are
// two-sided.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "auditcov/index_core.hpp"
#include "auditcov/survey_estimation.hpp"

namespace auditcov {

enum class TestKind { Z, B };

std::string_view to_string(TestKind kind) noexcept;

struct TestResult {
  TestKind kind = TestKind::Z;
  double effect = 0.0;     // D for Z, beta - 1 for B
  double statistic = 0.0;
  double p_value = 1.0;
  double variance = 0.0;
  std::optional<double> slope;  // beta for B-tests
  std::string survey_label;     // g
  std::string proxy_label;      // g'
  std::string period_first;
  std::string period_last;
  std::size_t first_period = 0;  // zero-based column of period_first
  std::size_t last_period = 0;
  std::size_t period_count = 0;
};

struct SlopeFit {
  double beta_hat = 0.0;
  Vector d;
};

/// Variances below this fraction of scale^2 are treated as zero.
inline constexpr double kDegenerateVarianceFactor = 1e-20;

TestResult z_test(const PriceSeries& prices, const WeightEstimate& est,
                  const WeightVector& w_proxy, const PeriodSet& periods = {});

SlopeFit unity_slope_fit(const PriceSeries& prices, const WeightEstimate& est,
                         const WeightVector& w_proxy);

TestResult b_test(const PriceSeries& prices, const WeightEstimate& est,
                  const WeightVector& w_proxy);

struct BatteryPair {
  std::string survey_group;  // g
  std::string proxy_group;   // g'
};

struct BatteryOptions {
  /// Each set yields one mean-effect Z-test and, with >= 3 periods, one
  /// B-test on that sub-panel. Empty list means one set covering all periods.
  std::vector<PeriodSet> period_sets;
  /// Also run the Z-test on every single period of each set.
  bool per_period = false;
};

/// Z- and B-tests for every requested (g, g') pair. Output is sorted by
/// (g, g', first period, last period, period count, kind).
std::vector<TestResult> cross_group_battery(
    const PriceSeries& prices, const std::map<std::string, WeightEstimate>& survey_ests,
    const std::map<std::string, WeightVector>& proxies, const std::vector<BatteryPair>& pairs,
    const BatteryOptions& options = {});

}  // namespace auditcov
