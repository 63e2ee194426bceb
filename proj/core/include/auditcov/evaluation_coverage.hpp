#pragma once

// Evaluation coverage: the probability that an estimate lands inside an
// imaginary interval (Z_A - omega, Z_A + omega) with Z_A ~ N(theta_0, sigma^2),
// sigma = omega / kappa and kappa the (1 + alpha)/2 normal quantile. The
// truth itself is covered with probability alpha.
//
// Every closed form here specializes one kernel: for an estimate distributed
// N(theta_0 + bias, tau^2),
//
//   c(bias, tau^2) = Phi((bias + omega)/nu) - Phi((bias - omega)/nu),
//   nu^2 = sigma^2 + tau^2.

#include <cstddef>
#include <optional>

namespace auditcov {

double kappa_quantile(double alpha);

class EvalScheme {
 public:
  /// alpha in (0, 1), omega > 0 (index units).
  static EvalScheme create(double alpha, double omega);

  double alpha() const noexcept { return alpha_; }
  double omega() const noexcept { return omega_; }
  double kappa() const noexcept { return kappa_; }
  double sigma() const noexcept { return sigma_; }

 private:
  EvalScheme() = default;
  double alpha_ = 0.0;
  double omega_ = 0.0;
  double kappa_ = 0.0;
  double sigma_ = 0.0;
};

/// Kernel: coverage of N(theta_0 + bias, noise_variance).
double biased_noisy_coverage(double bias, double noise_variance, const EvalScheme& scheme);

/// Coverage of a fixed value theta_star when the truth is theta_true.
double coverage_of_constant(double theta_star, double theta_true, const EvalScheme& scheme);

/// Coverage of an unbiased normal estimator with the given variance.
double coverage_of_unbiased(double variance, const EvalScheme& scheme);

struct CoverageEstimate {
  double value = 0.0;
  double variance = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  bool ci_clipped = false;
  double theta_star = 0.0;
  std::optional<double> theta_audit;
  /// Only for unbiased-estimator coverage: the variance obtained with the
  /// omega^2 / (4 tau^2) factor instead of the delta-method omega^2 / (4 tau^6).
  std::optional<double> variance_alt_factor;
};

/// Normal quantile used for coverage-estimate intervals (95%).
inline constexpr double kCoverageCiQuantile = 1.959963984540054;

/// Plug-in coverage of theta_star with the truth replaced by an audit
/// estimate, plus its delta-method variance
///   (audit_variance / sigma^2) * (phi(u + kappa) - phi(u - kappa))^2,
///   u = (theta_star - theta_audit) / sigma.
CoverageEstimate estimate_coverage(double theta_star, double theta_audit,
                                   double audit_variance, const EvalScheme& scheme);

/// Coverage of an unbiased estimator whose variance is itself estimated by
/// v_hat (with variance var_of_variance):
///   value    = 2 Phi(omega / tau) - 1,  tau^2 = sigma^2 + v_hat
///   variance = (2 phi(omega / tau))^2 * omega^2 / (4 tau^6) * var_of_variance.
CoverageEstimate estimate_unbiased_coverage(double audit_variance_estimate,
                                            double var_of_variance,
                                            const EvalScheme& scheme);

/// 2 v^2 / (n - 1): variance of a variance estimate under normality.
double default_variance_of_variance(double variance_estimate, std::size_t n);

struct MseEstimate {
  double value = 0.0;
  bool negative = false;
};

/// (theta_star - theta_audit)^2 - audit_variance; unbiased for the MSE of
/// theta_star, and routinely negative when the audit variance dominates.
MseEstimate mse_estimate(double theta_star, double theta_audit, double audit_variance);

struct BreakEven {
  double variance = 0.0;
  double target_coverage = 0.0;
  double residual = 0.0;
  std::size_t iterations = 0;
  /// True when the target is at or above alpha, so no positive variance matches.
  bool target_at_or_above_alpha = false;
};

/// Variance v >= 0 with coverage_of_unbiased(v) == target. Coverage of an
/// unbiased estimator is strictly decreasing in v, so the root is unique.
BreakEven break_even_variance_for_coverage(double target_coverage, const EvalScheme& scheme);

/// Variance at which an unbiased estimator matches the coverage of the
/// constant theta_star (zero when theta_star == theta_true).
BreakEven break_even_variance(double theta_star, double theta_true, const EvalScheme& scheme);

}  // namespace auditcov
