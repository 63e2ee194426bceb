#include "auditcov/hypothesis_tests.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "auditcov/error.hpp"
#include "auditcov/normal.hpp"

namespace auditcov {

std::string_view to_string(TestKind kind) noexcept { return kind == TestKind::Z ? "Z" : "B"; }

namespace {

void require_groups(const PriceSeries& prices, const WeightEstimate& est,
                    const WeightVector& w_proxy) {
  if (est.size() != prices.groups() || w_proxy.size() != prices.groups()) {
    throw Error(ErrorCode::dimension_mismatch,
                "test inputs disagree on the number of groups: prices " +
                    std::to_string(prices.groups()) + ", survey " + std::to_string(est.size()) +
                    ", proxy " + std::to_string(w_proxy.size()));
  }
}

void finish(TestResult& r, double scale) {
  if (r.variance < kDegenerateVarianceFactor * scale * scale) {
    throw Error(ErrorCode::degenerate_test,
                std::string(to_string(r.kind)) + "-test variance is zero (" +
                    std::to_string(r.variance) + ")");
  }
  r.statistic = r.effect / std::sqrt(r.variance);
  r.p_value = two_sided_p_value(r.statistic);
}

void label_periods(TestResult& r, const PriceSeries& prices, const PeriodSet& periods) {
  const auto& labels = prices.period_labels();
  if (periods.empty()) {
    r.period_first = labels.front();
    r.period_last = labels.back();
    r.first_period = 0;
    r.last_period = labels.size() - 1;
    r.period_count = labels.size();
  } else {
    r.period_first = labels[periods.front()];
    r.period_last = labels[periods.back()];
    r.first_period = periods.front();
    r.last_period = periods.back();
    r.period_count = periods.size();
  }
}

}  // namespace

TestResult z_test(const PriceSeries& prices, const WeightEstimate& est,
                  const WeightVector& w_proxy, const PeriodSet& periods) {
  require_groups(prices, est, w_proxy);
  const Vector pbar = prices.mean_vector(periods);
  TestResult r;
  r.kind = TestKind::Z;
  r.effect = source_effect(pbar, est.point, w_proxy);
  r.variance = quadratic_variance(pbar, est.covariance);
  r.survey_label = est.point.label();
  r.proxy_label = w_proxy.label();
  label_periods(r, prices, periods);
  finish(r, pbar.cwiseAbs().maxCoeff());
  return r;
}

SlopeFit unity_slope_fit(const PriceSeries& prices, const WeightEstimate& est,
                         const WeightVector& w_proxy) {
  require_groups(prices, est, w_proxy);
  if (prices.periods() < 3) {
    throw Error(ErrorCode::insufficient_data, "unity slope fit needs at least 3 periods");
  }
  const Matrix& p = prices.values();
  Matrix centered = p;
  centered.colwise() -= p.rowwise().mean();
  // Centered proxy index series P*_t - mean(P*).
  const Vector proxy_dev = centered.transpose() * w_proxy.values();
  const double denom = proxy_dev.squaredNorm();
  const Vector proxy_series = p.transpose() * w_proxy.values();
  const double level = proxy_series.cwiseAbs().maxCoeff();
  const double floor = 1e-24 * level * level * static_cast<double>(prices.periods());
  if (!(denom > floor)) {
    throw Error(ErrorCode::degenerate_test,
                "proxy index series is constant; regression slope undefined");
  }
  SlopeFit fit;
  fit.d = (centered * proxy_dev) / denom;
  fit.beta_hat = fit.d.dot(est.point.values());
  return fit;
}

TestResult b_test(const PriceSeries& prices, const WeightEstimate& est,
                  const WeightVector& w_proxy) {
  const SlopeFit fit = unity_slope_fit(prices, est, w_proxy);
  TestResult r;
  r.kind = TestKind::B;
  r.slope = fit.beta_hat;
  r.effect = fit.beta_hat - 1.0;
  r.variance = quadratic_variance(fit.d, est.covariance);
  r.survey_label = est.point.label();
  r.proxy_label = w_proxy.label();
  label_periods(r, prices, {});
  // d is dimensionless up to 1/level; unit scale for the slope statistic.
  finish(r, fit.d.cwiseAbs().maxCoeff());
  return r;
}

std::vector<TestResult> cross_group_battery(
    const PriceSeries& prices, const std::map<std::string, WeightEstimate>& survey_ests,
    const std::map<std::string, WeightVector>& proxies, const std::vector<BatteryPair>& pairs,
    const BatteryOptions& options) {
  if (pairs.empty()) {
    throw Error(ErrorCode::invalid_argument, "cross-group battery needs at least one pair");
  }
  std::vector<PeriodSet> sets = options.period_sets;
  if (sets.empty()) {
    PeriodSet all(prices.periods());
    std::iota(all.begin(), all.end(), std::size_t{0});
    sets.push_back(std::move(all));
  }

  std::vector<TestResult> out;
  for (const auto& pair : pairs) {
    const auto est_it = survey_ests.find(pair.survey_group);
    if (est_it == survey_ests.end()) {
      throw Error(ErrorCode::unknown_label, "no survey weights for '" + pair.survey_group + "'");
    }
    const auto proxy_it = proxies.find(pair.proxy_group);
    if (proxy_it == proxies.end()) {
      throw Error(ErrorCode::unknown_label, "no proxy weights for '" + pair.proxy_group + "'");
    }
    const WeightEstimate& est = est_it->second;
    const WeightVector& proxy = proxy_it->second;

    auto tag = [&](TestResult r) {
      r.survey_label = pair.survey_group;
      r.proxy_label = pair.proxy_group;
      return r;
    };

    for (const auto& set : sets) {
      out.push_back(tag(z_test(prices, est, proxy, set)));
      if (set.size() >= 3) {
        TestResult b = tag(b_test(prices.select_periods(set), est, proxy));
        b.first_period = set.front();
        b.last_period = set.back();
        out.push_back(std::move(b));
      }
      if (options.per_period) {
        for (std::size_t t : set) {
          out.push_back(tag(z_test(prices, est, proxy, PeriodSet{t})));
        }
      }
    }
  }

  std::stable_sort(out.begin(), out.end(), [](const TestResult& a, const TestResult& b) {
    return std::tie(a.survey_label, a.proxy_label, a.first_period, a.last_period,
                    b.period_count, a.kind) < std::tie(b.survey_label, b.proxy_label,
                                                       b.first_period, b.last_period,
                                                       a.period_count, b.kind);
  });
  return out;
}

}  // namespace auditcov
