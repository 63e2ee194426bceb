#pragma once

// Weighted price-index arithmetic: index evaluation, the source-effect
// decomposition and the trend rewrite of a group-by-period price panel.
//
// Conventions: groups are rows (i = 0..m-1), periods are columns
// (t = 0..T-1). Period indices in this API are zero-based; labels carry
// whatever naming the input used.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace auditcov {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Zero-based column indices into a PriceSeries. Empty means "all periods".
using PeriodSet = std::vector<std::size_t>;

/// m consumption groups by T periods of strictly positive, finite index values.
class PriceSeries {
 public:
  /// Validates m >= 2, T >= 1, positivity/finiteness and label counts.
  /// Empty label vectors are replaced by "g1..gm" / "1..T".
  static PriceSeries create(Matrix values, std::vector<std::string> group_labels = {},
                            std::vector<std::string> period_labels = {});

  std::size_t groups() const noexcept { return static_cast<std::size_t>(values_.rows()); }
  std::size_t periods() const noexcept { return static_cast<std::size_t>(values_.cols()); }
  const Matrix& values() const noexcept { return values_; }
  const std::vector<std::string>& group_labels() const noexcept { return group_labels_; }
  const std::vector<std::string>& period_labels() const noexcept { return period_labels_; }

  /// Column p_t.
  Vector period_vector(std::size_t t) const;
  /// Unweighted mean of the selected columns (all columns when empty).
  Vector mean_vector(const PeriodSet& periods = {}) const;
  /// Sub-panel restricted to the given columns, in the given order.
  PriceSeries select_periods(const PeriodSet& periods) const;

  std::size_t group_index(const std::string& label) const;
  std::size_t period_index(const std::string& label) const;

  /// Largest |p_it|, the natural scale for absolute tolerances.
  double scale() const noexcept { return values_.cwiseAbs().maxCoeff(); }

 private:
  PriceSeries() = default;
  Matrix values_;
  std::vector<std::string> group_labels_;
  std::vector<std::string> period_labels_;
};

/// Non-negative weights normalized to sum to one. The pre-normalization sum
/// is kept so reports can flag inputs that were not already shares.
class WeightVector {
 public:
  static constexpr double kRenormalizationWarnThreshold = 1e-6;

  static WeightVector create(Vector raw, std::string label = {});

  std::size_t size() const noexcept { return static_cast<std::size_t>(w_.size()); }
  const Vector& values() const noexcept { return w_; }
  double operator[](std::size_t i) const { return w_(static_cast<Eigen::Index>(i)); }
  const std::string& label() const noexcept { return label_; }
  double raw_sum() const noexcept { return raw_sum_; }
  bool renormalized() const noexcept;

 private:
  WeightVector() = default;
  Vector w_;
  double raw_sum_ = 1.0;
  std::string label_;
};

/// p_it = mean_prices_i + trends_i * time_centers_t + residuals_it, with
/// time_centers_t = t - (T+1)/2 (one-based t) and per-group OLS trends.
struct TrendDecomposition {
  Vector mean_prices;
  Vector trends;
  Vector time_centers;
  Matrix residuals;

  Matrix reconstruct() const;
};

struct WeightAggregates {
  double mean_index = 0.0;
  double trend = 0.0;
  Vector residual_series;
};

/// p_t' w.
double weighted_index(const PriceSeries& prices, const WeightVector& w, std::size_t t);

/// p' (w_survey - w_proxy) for an arbitrary price vector.
double source_effect(const Vector& prices, const WeightVector& w_survey,
                     const WeightVector& w_proxy);
/// Source effect in period t.
double source_effect(const PriceSeries& prices, const WeightVector& w_survey,
                     const WeightVector& w_proxy, std::size_t t);
/// Source effect on the mean price vector over `periods` (all when empty).
double mean_source_effect(const PriceSeries& prices, const WeightVector& w_survey,
                          const WeightVector& w_proxy, const PeriodSet& periods = {});

/// b_i = w_survey_i / w_proxy_i - 1. Throws zero_division naming the group
/// when a proxy weight is zero.
Vector relative_weight_diff(const WeightVector& w_survey, const WeightVector& w_proxy);

/// Covariance of x and y under the probability mass function w.
double weighted_covariance(const Vector& x, const Vector& y, const WeightVector& w);

TrendDecomposition trend_decomposition(const PriceSeries& prices);

WeightAggregates weight_aggregates(const TrendDecomposition& decomp, const WeightVector& w);

/// The index series (p_t' w)_t over all periods.
Vector index_series(const PriceSeries& prices, const WeightVector& w);

}  // namespace auditcov
