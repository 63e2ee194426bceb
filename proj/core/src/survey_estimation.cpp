#include "auditcov/survey_estimation.hpp"

#include <cmath>
#include <utility>

#include "auditcov/error.hpp"
#include "auditcov/rng.hpp"

namespace auditcov {

namespace {
constexpr double kMedianTotal = 1000.0;
}

WeightEstimate make_weight_estimate(WeightVector point, Matrix covariance,
                                    std::size_t n_households) {
  const auto m = static_cast<Eigen::Index>(point.size());
  if (covariance.rows() != m || covariance.cols() != m) {
    throw Error(ErrorCode::dimension_mismatch,
                "covariance must be " + std::to_string(m) + "x" + std::to_string(m));
  }
  if (!covariance.allFinite()) {
    throw Error(ErrorCode::invalid_argument, "covariance has non-finite entries");
  }
  const double trace = covariance.trace();
  const double scale = std::max(std::fabs(trace), 1e-300);
  if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw Error(ErrorCode::invalid_argument, "covariance is not symmetric");
  }
  covariance = 0.5 * (covariance + covariance.transpose());
  if (trace > 0.0) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(covariance, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -1e-10 * trace) {
      throw Error(ErrorCode::invalid_argument, "covariance is not positive semi-definite");
    }
    if (covariance.rowwise().sum().cwiseAbs().maxCoeff() > 1e-10 * trace) {
      throw Error(ErrorCode::invalid_argument,
                  "share covariance rows must sum to zero (shares sum to one)");
    }
  } else if (trace < 0.0) {
    throw Error(ErrorCode::invalid_argument, "covariance has negative trace");
  }
  return WeightEstimate{std::move(point), std::move(covariance), n_households, 0};
}

WeightEstimate estimate_weights(std::span<const HouseholdRecord> records, std::string label) {
  if (records.empty()) {
    throw Error(ErrorCode::insufficient_data, "no household records");
  }
  const Eigen::Index m = records.front().expenditures.size();
  std::vector<const HouseholdRecord*> kept;
  kept.reserve(records.size());
  for (const auto& r : records) {
    if (r.expenditures.size() != m) {
      throw Error(ErrorCode::dimension_mismatch,
                  "household '" + r.household_id + "' has " +
                      std::to_string(r.expenditures.size()) + " groups, expected " +
                      std::to_string(m));
    }
    if (!r.expenditures.allFinite() || (r.expenditures.array() < 0.0).any()) {
      throw Error(ErrorCode::invalid_argument,
                  "household '" + r.household_id + "' has negative or non-finite expenditure");
    }
    if (r.expenditures.sum() > 0.0) kept.push_back(&r);
  }
  const std::size_t dropped = records.size() - kept.size();
  const auto n = kept.size();
  if (n == 0) {
    throw Error(ErrorCode::insufficient_data, "all households have zero expenditure");
  }
  if (n < 2) {
    throw Error(ErrorCode::insufficient_data,
                "at least 2 households with positive expenditure are required");
  }

  Vector totals = Vector::Zero(m);
  double grand = 0.0;
  for (const auto* r : kept) {
    totals += r->expenditures;
    grand += r->expenditures.sum();
  }
  const Vector w = totals / grand;
  const double mean_total = grand / static_cast<double>(n);

  Matrix z(m, static_cast<Eigen::Index>(n));
  for (std::size_t h = 0; h < n; ++h) {
    const auto& x = kept[h]->expenditures;
    z.col(static_cast<Eigen::Index>(h)) = (x - w * x.sum()) / mean_total;
  }
  const Vector zbar = z.rowwise().mean();
  z.colwise() -= zbar;
  Matrix cov = (z * z.transpose()) / (static_cast<double>(n) * static_cast<double>(n - 1));
  cov = 0.5 * (cov + cov.transpose());

  WeightEstimate est{WeightVector::create(w, std::move(label)), std::move(cov), n, dropped};
  return est;
}

std::vector<HouseholdRecord> simulate_households(const WeightVector& true_weights,
                                                 std::size_t n, double dispersion,
                                                 std::uint64_t seed) {
  if (n == 0) {
    throw Error(ErrorCode::invalid_argument, "simulate_households: n must be positive");
  }
  if (!(dispersion > 0.0) || !std::isfinite(dispersion)) {
    throw Error(ErrorCode::invalid_argument,
                "simulate_households: dispersion must be positive and finite");
  }
  const auto m = static_cast<Eigen::Index>(true_weights.size());
  const double concentration = 1.0 / (dispersion * dispersion);
  const double log_median = std::log(kMedianTotal);

  std::vector<HouseholdRecord> out;
  out.reserve(n);
  for (std::size_t h = 0; h < n; ++h) {
    Rng rng(derive_seed(seed, h));
    const double total = std::exp(log_median + dispersion * rng.normal());
    Vector g(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      g(i) = rng.gamma(concentration * true_weights[static_cast<std::size_t>(i)]);
    }
    double gsum = g.sum();
    if (!(gsum > 0.0)) {
      // Every gamma draw underflowed; fall back to the mean allocation.
      g = true_weights.values();
      gsum = 1.0;
    }
    out.push_back({"h" + std::to_string(h + 1), (total / gsum) * g, std::nullopt});
  }
  return out;
}

double quadratic_variance(const Vector& prices, const Matrix& covariance) {
  if (covariance.rows() != prices.size() || covariance.cols() != prices.size()) {
    throw Error(ErrorCode::dimension_mismatch, "quadratic_variance: dimension mismatch");
  }
  const double q = prices.dot(covariance * prices);
  const double scale =
      prices.cwiseAbs().dot(covariance.cwiseAbs() * prices.cwiseAbs());
  if (q < 0.0) {
    if (q < -1e-10 * scale) {
      throw Error(ErrorCode::invalid_argument,
                  "negative index variance " + std::to_string(q) +
                      " indicates a broken covariance matrix");
    }
    return 0.0;
  }
  return q;
}

double index_variance(const PriceSeries& prices, const WeightEstimate& est, std::size_t t) {
  if (est.size() != prices.groups()) {
    throw Error(ErrorCode::dimension_mismatch, "index_variance: weight estimate has " +
                                                   std::to_string(est.size()) +
                                                   " groups, prices have " +
                                                   std::to_string(prices.groups()));
  }
  return quadratic_variance(prices.period_vector(t), est.covariance);
}

}  // namespace auditcov
