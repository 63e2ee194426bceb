#include "auditcov/index_core.hpp"

#include <cmath>
#include <utility>

#include "auditcov/error.hpp"

namespace auditcov {

namespace {

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw Error(ErrorCode::dimension_mismatch, std::string(what) + ": dimension " +
                                                   std::to_string(a) + " vs " +
                                                   std::to_string(b));
  }
}

void require_period(const PriceSeries& prices, std::size_t t) {
  if (t >= prices.periods()) {
    throw Error(ErrorCode::invalid_period, "period index " + std::to_string(t) +
                                               " out of range (T = " +
                                               std::to_string(prices.periods()) + ")");
  }
}

}  // namespace

PriceSeries PriceSeries::create(Matrix values, std::vector<std::string> group_labels,
                                std::vector<std::string> period_labels) {
  const auto m = static_cast<std::size_t>(values.rows());
  const auto T = static_cast<std::size_t>(values.cols());
  if (m < 2) {
    throw Error(ErrorCode::insufficient_data, "price series needs at least 2 groups");
  }
  if (T < 1) {
    throw Error(ErrorCode::insufficient_data, "price series needs at least 1 period");
  }
  if (group_labels.empty()) {
    for (std::size_t i = 0; i < m; ++i) group_labels.push_back("g" + std::to_string(i + 1));
  }
  if (period_labels.empty()) {
    for (std::size_t t = 0; t < T; ++t) period_labels.push_back(std::to_string(t + 1));
  }
  require_same_size(group_labels.size(), m, "group labels");
  require_same_size(period_labels.size(), T, "period labels");
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index t = 0; t < values.cols(); ++t) {
      const double v = values(i, t);
      if (!std::isfinite(v) || v <= 0.0) {
        throw Error(ErrorCode::invalid_argument,
                    "price index must be finite and positive: group " +
                        group_labels[static_cast<std::size_t>(i)] + ", period " +
                        period_labels[static_cast<std::size_t>(t)] + " has " +
                        std::to_string(v));
      }
    }
  }
  PriceSeries out;
  out.values_ = std::move(values);
  out.group_labels_ = std::move(group_labels);
  out.period_labels_ = std::move(period_labels);
  return out;
}

Vector PriceSeries::period_vector(std::size_t t) const {
  require_period(*this, t);
  return values_.col(static_cast<Eigen::Index>(t));
}

Vector PriceSeries::mean_vector(const PeriodSet& periods) const {
  if (periods.empty()) return values_.rowwise().mean();
  Vector sum = Vector::Zero(values_.rows());
  for (std::size_t t : periods) {
    require_period(*this, t);
    sum += values_.col(static_cast<Eigen::Index>(t));
  }
  return sum / static_cast<double>(periods.size());
}

PriceSeries PriceSeries::select_periods(const PeriodSet& periods) const {
  if (periods.empty()) return *this;
  Matrix sub(values_.rows(), static_cast<Eigen::Index>(periods.size()));
  std::vector<std::string> labels;
  labels.reserve(periods.size());
  for (std::size_t k = 0; k < periods.size(); ++k) {
    require_period(*this, periods[k]);
    sub.col(static_cast<Eigen::Index>(k)) = values_.col(static_cast<Eigen::Index>(periods[k]));
    labels.push_back(period_labels_[periods[k]]);
  }
  PriceSeries out;
  out.values_ = std::move(sub);
  out.group_labels_ = group_labels_;
  out.period_labels_ = std::move(labels);
  return out;
}

std::size_t PriceSeries::group_index(const std::string& label) const {
  for (std::size_t i = 0; i < group_labels_.size(); ++i) {
    if (group_labels_[i] == label) return i;
  }
  throw Error(ErrorCode::unknown_label, "unknown group label '" + label + "'");
}

std::size_t PriceSeries::period_index(const std::string& label) const {
  for (std::size_t t = 0; t < period_labels_.size(); ++t) {
    if (period_labels_[t] == label) return t;
  }
  throw Error(ErrorCode::invalid_period, "unknown period label '" + label + "'");
}

WeightVector WeightVector::create(Vector raw, std::string label) {
  if (raw.size() == 0) {
    throw Error(ErrorCode::invalid_argument, "weight vector is empty");
  }
  for (Eigen::Index i = 0; i < raw.size(); ++i) {
    if (!std::isfinite(raw(i)) || raw(i) < 0.0) {
      throw Error(ErrorCode::invalid_argument,
                  "weight " + std::to_string(i) + " of '" + label +
                      "' must be finite and non-negative, got " + std::to_string(raw(i)));
    }
  }
  const double sum = raw.sum();
  if (!(sum > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "weights of '" + label + "' sum to zero");
  }
  WeightVector out;
  out.w_ = raw / sum;
  out.raw_sum_ = sum;
  out.label_ = std::move(label);
  return out;
}

bool WeightVector::renormalized() const noexcept {
  return std::fabs(raw_sum_ - 1.0) > kRenormalizationWarnThreshold;
}

Matrix TrendDecomposition::reconstruct() const {
  Matrix out = trends * time_centers.transpose() + residuals;
  out.colwise() += mean_prices;
  return out;
}

double weighted_index(const PriceSeries& prices, const WeightVector& w, std::size_t t) {
  require_same_size(w.size(), prices.groups(), "weighted_index");
  require_period(prices, t);
  return prices.values().col(static_cast<Eigen::Index>(t)).dot(w.values());
}

Vector index_series(const PriceSeries& prices, const WeightVector& w) {
  require_same_size(w.size(), prices.groups(), "index_series");
  return prices.values().transpose() * w.values();
}

double source_effect(const Vector& prices, const WeightVector& w_survey,
                     const WeightVector& w_proxy) {
  require_same_size(w_survey.size(), w_proxy.size(), "source_effect weights");
  require_same_size(static_cast<std::size_t>(prices.size()), w_survey.size(),
                    "source_effect prices");
  return prices.dot(w_survey.values() - w_proxy.values());
}

double source_effect(const PriceSeries& prices, const WeightVector& w_survey,
                     const WeightVector& w_proxy, std::size_t t) {
  return source_effect(prices.period_vector(t), w_survey, w_proxy);
}

double mean_source_effect(const PriceSeries& prices, const WeightVector& w_survey,
                          const WeightVector& w_proxy, const PeriodSet& periods) {
  return source_effect(prices.mean_vector(periods), w_survey, w_proxy);
}

Vector relative_weight_diff(const WeightVector& w_survey, const WeightVector& w_proxy) {
  require_same_size(w_survey.size(), w_proxy.size(), "relative_weight_diff");
  Vector b(static_cast<Eigen::Index>(w_proxy.size()));
  for (std::size_t i = 0; i < w_proxy.size(); ++i) {
    if (w_proxy[i] == 0.0) {
      throw Error(ErrorCode::zero_division,
                  "proxy weight of group " + std::to_string(i + 1) + " ('" + w_proxy.label() +
                      "') is zero; relative weight difference undefined");
    }
    b(static_cast<Eigen::Index>(i)) = w_survey[i] / w_proxy[i] - 1.0;
  }
  return b;
}

double weighted_covariance(const Vector& x, const Vector& y, const WeightVector& w) {
  require_same_size(static_cast<std::size_t>(x.size()), w.size(), "weighted_covariance x");
  require_same_size(static_cast<std::size_t>(y.size()), w.size(), "weighted_covariance y");
  const Vector& pmf = w.values();
  const double mx = pmf.dot(x);
  const double my = pmf.dot(y);
  return (pmf.array() * (x.array() - mx) * (y.array() - my)).sum();
}

TrendDecomposition trend_decomposition(const PriceSeries& prices) {
  const auto T = static_cast<Eigen::Index>(prices.periods());
  if (T < 2) {
    throw Error(ErrorCode::insufficient_data, "trend decomposition needs at least 2 periods");
  }
  TrendDecomposition d;
  d.time_centers.resize(T);
  const double center = 0.5 * static_cast<double>(T + 1);
  for (Eigen::Index t = 0; t < T; ++t) {
    d.time_centers(t) = static_cast<double>(t + 1) - center;
  }
  const Matrix& p = prices.values();
  d.mean_prices = p.rowwise().mean();
  d.trends = (p * d.time_centers) / d.time_centers.squaredNorm();
  d.residuals = p;
  d.residuals.colwise() -= d.mean_prices;
  d.residuals -= d.trends * d.time_centers.transpose();
  return d;
}

WeightAggregates weight_aggregates(const TrendDecomposition& decomp, const WeightVector& w) {
  require_same_size(w.size(), static_cast<std::size_t>(decomp.mean_prices.size()),
                    "weight_aggregates");
  return {decomp.mean_prices.dot(w.values()), decomp.trends.dot(w.values()),
          decomp.residuals.transpose() * w.values()};
}

}  // namespace auditcov
