#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "auditcov/index_core.hpp"

namespace auditcov {

struct HouseholdRecord {
  std::string household_id;
  Vector expenditures;  // one entry per consumption group, currency units
  std::optional<std::string> stratum;
};

/// Estimated expenditure shares with their sampling covariance.
struct WeightEstimate {
  WeightVector point;
  Matrix covariance;
  std::size_t n_households = 0;
  /// Households discarded because their total expenditure was zero.
  std::size_t dropped_households = 0;

  std::size_t size() const noexcept { return point.size(); }
};

/// Builds a WeightEstimate from precomputed parts, validating symmetry,
/// positive semi-definiteness and the zero row-sum property of share
/// covariances.
WeightEstimate make_weight_estimate(WeightVector point, Matrix covariance,
                                    std::size_t n_households);

/// Ratio-of-totals share estimator with the with-replacement SRS
/// linearization variance
///   V = 1/(n(n-1)) sum_h (z_h - zbar)(z_h - zbar)',  z_h = (x_h - w * s_h) / sbar.
/// Households with zero total are dropped and counted.
WeightEstimate estimate_weights(std::span<const HouseholdRecord> records,
                                std::string label = {});

/// Synthetic micro-data: log-normal household totals (median 1000, log-sd
/// `dispersion`) split across groups by a Dirichlet draw with mean
/// `true_weights` and concentration 1 / dispersion^2. Household h uses the
/// stream derive_seed(seed, h), so output depends only on the arguments.
std::vector<HouseholdRecord> simulate_households(const WeightVector& true_weights,
                                                 std::size_t n, double dispersion,
                                                 std::uint64_t seed);

/// Quadratic form p' V p for a share covariance. Small negative round-off is
/// clamped to zero; anything below -1e-10 * scale signals a broken covariance.
double quadratic_variance(const Vector& prices, const Matrix& covariance);

/// p_t' V(w) p_t.
double index_variance(const PriceSeries& prices, const WeightEstimate& est, std::size_t t);

}  // namespace auditcov
