#pragma once

// Brute-force stochastic checks of the closed forms in evaluation_coverage
// and hypothesis_tests.
//
// Replicate r of a plan draws from Rng(derive_seed(plan.seed, r)) and writes
// into its own slot; aggregation runs sequentially over the slots afterwards.
// Results therefore do not depend on the number of worker threads.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "auditcov/evaluation_coverage.hpp"
#include "auditcov/index_core.hpp"

namespace auditcov {

enum class Scenario {
  coverage_constant,
  coverage_unbiased,
  coverage_biased_noisy,
  z_calibration,
  b_calibration,
  power_curve,
  mse_unbiasedness,
  delta_method_check
};

std::string_view to_string(Scenario s) noexcept;

/// Synthetic survey population: a fixed price panel, the population shares
/// and the micro-data generator settings.
struct SyntheticDesign {
  PriceSeries prices;
  WeightVector true_weights;
  std::size_t households = 1000;
  double dispersion = 0.6;
};

/// Six groups, 36 periods: distinct levels, linear trends and a common
/// seasonal pattern with group loadings. Deterministic.
SyntheticDesign standard_design();

struct CoverageParams {
  double alpha = 0.95;
  double omega = 0.058;
  double theta_true = 100.0;
  double bias = 0.0;      // theta_star - theta_true
  double noise_sd = 0.0;  // tau; 0 for a constant estimate
};

struct CalibrationParams {
  SyntheticDesign design = standard_design();
  double level = 0.05;
};

enum class BiasDirection {
  /// Proxy weights shifted along the centered trend vector.
  trend_aligned,
  /// Shift orthogonal to the constant vector and every period's prices, so
  /// Cov(b, p_t; w*) = 0 for all t.
  trend_orthogonal
};

struct PowerParams {
  SyntheticDesign design = standard_design();
  BiasDirection direction = BiasDirection::trend_aligned;
  /// Largest absolute per-group weight shift at each grid point.
  std::vector<double> magnitudes{0.0, 0.005, 0.01, 0.02, 0.04};
  double level = 0.05;
};

struct MseParams {
  double theta_true = 100.0;
  double bias = 0.0;
  double audit_variance = 0.029 * 0.029;
  /// Degrees of freedom of the audit variance estimate (scaled chi-square);
  /// 0 means the variance is known exactly.
  std::size_t variance_df = 199;
};

enum class DeltaTarget { constant_coverage, unbiased_coverage };

struct DeltaParams {
  DeltaTarget target = DeltaTarget::constant_coverage;
  double alpha = 0.95;
  double omega = 0.058;
  double theta_true = 100.0;
  double bias = 0.0;  // theta_star - theta_true (constant_coverage only)
  double audit_variance = 0.0;
  std::size_t variance_df = 199;  // unbiased_coverage only
};

using ScenarioParams =
    std::variant<CoverageParams, CalibrationParams, PowerParams, MseParams, DeltaParams>;

struct SimulationPlan {
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  Scenario scenario = Scenario::coverage_constant;
  ScenarioParams parameters = CoverageParams{};
  /// Worker threads; 0 = hardware concurrency. Never affects results.
  unsigned threads = 0;
};

struct SimulationOutcome {
  std::string label;
  double point = 0.0;
  double mc_stderr = 0.0;
  double target = 0.0;
  double z_score = 0.0;
  std::size_t replicates_used = 0;
  std::optional<double> ks_distance;
  std::optional<double> negative_fraction;
  /// point / target - 1, for standard-deviation comparisons.
  std::optional<double> relative_error;
  /// Delta-method checks of the unbiased coverage: target under the
  /// alternative omega^2 / (4 tau^2) factor.
  std::optional<double> alt_target;
};

/// Default replicate counts per scenario family.
inline constexpr std::size_t kCoverageReplicates = 200'000;
inline constexpr std::size_t kCalibrationReplicates = 10'000;
inline constexpr std::size_t kPowerReplicates = 2'000;
inline constexpr std::size_t kMseReplicates = 100'000;
inline constexpr std::size_t kDeltaReplicates = 100'000;

/// Fraction of replicates where the estimate falls in (Z_A - omega, Z_A + omega);
/// target is biased_noisy_coverage.
SimulationOutcome empirical_coverage(const SimulationPlan& plan);

/// Rejection rate of the Z- or B-test with proxy = population weights;
/// target is the nominal level; ks_distance against N(0,1).
SimulationOutcome test_calibration(const SimulationPlan& plan);

/// Rejection rates of both tests at every magnitude (Z then B per grid point),
/// all computed on the same simulated surveys.
std::vector<SimulationOutcome> power_curve(const SimulationPlan& plan);

/// Mean of mse_estimate vs. the true squared bias.
SimulationOutcome mse_unbiasedness(const SimulationPlan& plan);

/// Empirical SD of the coverage estimator vs. its delta-method SD.
SimulationOutcome delta_method_check(const SimulationPlan& plan);

/// Unit direction (max |u_i| = 1, sum u = 0) used to bias proxy weights.
Vector bias_direction(const SyntheticDesign& design, BiasDirection direction);

/// Kolmogorov-Smirnov distance of a sample from N(0,1). Sorts its argument.
double ks_distance_normal(std::vector<double> sample);

struct VerificationCheck {
  std::string name;
  std::string rule;
  bool passed = false;
  std::vector<SimulationOutcome> outcomes;
};

struct VerificationOptions {
  std::uint64_t seed = 42;
  unsigned threads = 0;
  /// Multiplies every default replicate count (minimum 1 replicate).
  double replicate_scale = 1.0;
};

/// The full oracle suite behind the `verify` command.
std::vector<VerificationCheck> run_verification_suite(const VerificationOptions& options);

}  // namespace auditcov
