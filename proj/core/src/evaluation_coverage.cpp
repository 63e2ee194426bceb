#include "auditcov/evaluation_coverage.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "auditcov/error.hpp"
#include "auditcov/normal.hpp"
#include "auditcov/root_finding.hpp"

namespace auditcov {

namespace {

void require_non_negative(double v, const char* what) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw Error(ErrorCode::invalid_argument,
                std::string(what) + " must be finite and non-negative, got " + std::to_string(v));
  }
}

void fill_interval(CoverageEstimate& est) {
  const double half = kCoverageCiQuantile * std::sqrt(est.variance);
  const double lo = est.value - half;
  const double hi = est.value + half;
  est.ci_low = std::clamp(lo, 0.0, 1.0);
  est.ci_high = std::clamp(hi, 0.0, 1.0);
  est.ci_clipped = lo < 0.0 || hi > 1.0;
}

}  // namespace

double kappa_quantile(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::invalid_argument,
                "alpha must lie in (0,1), got " + std::to_string(alpha));
  }
  return normal_quantile(0.5 * (1.0 + alpha));
}

EvalScheme EvalScheme::create(double alpha, double omega) {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw Error(ErrorCode::invalid_argument,
                "omega must be positive and finite, got " + std::to_string(omega));
  }
  EvalScheme s;
  s.alpha_ = alpha;
  s.omega_ = omega;
  s.kappa_ = kappa_quantile(alpha);
  s.sigma_ = omega / s.kappa_;
  return s;
}

double biased_noisy_coverage(double bias, double noise_variance, const EvalScheme& scheme) {
  require_non_negative(noise_variance, "noise variance");
  const double sigma = scheme.sigma();
  const double nu = std::sqrt(sigma * sigma + noise_variance);
  const double b = std::fabs(bias);
  const double omega = scheme.omega();
  // Upper-tail form keeps relative precision when |bias| >> omega.
  return normal_sf((b - omega) / nu) - normal_sf((b + omega) / nu);
}

double coverage_of_constant(double theta_star, double theta_true, const EvalScheme& scheme) {
  return biased_noisy_coverage(theta_star - theta_true, 0.0, scheme);
}

double coverage_of_unbiased(double variance, const EvalScheme& scheme) {
  return biased_noisy_coverage(0.0, variance, scheme);
}

CoverageEstimate estimate_coverage(double theta_star, double theta_audit,
                                   double audit_variance, const EvalScheme& scheme) {
  require_non_negative(audit_variance, "audit variance");
  CoverageEstimate est;
  est.theta_star = theta_star;
  est.theta_audit = theta_audit;
  est.value = coverage_of_constant(theta_star, theta_audit, scheme);
  const double sigma = scheme.sigma();
  const double u = (theta_star - theta_audit) / sigma;
  const double slope = normal_pdf(u + scheme.kappa()) - normal_pdf(u - scheme.kappa());
  est.variance = audit_variance / (sigma * sigma) * slope * slope;
  fill_interval(est);
  return est;
}

CoverageEstimate estimate_unbiased_coverage(double audit_variance_estimate,
                                            double var_of_variance,
                                            const EvalScheme& scheme) {
  require_non_negative(audit_variance_estimate, "audit variance estimate");
  require_non_negative(var_of_variance, "variance of the variance estimate");
  CoverageEstimate est;
  est.value = coverage_of_unbiased(audit_variance_estimate, scheme);
  const double sigma = scheme.sigma();
  const double tau2 = sigma * sigma + audit_variance_estimate;
  const double omega = scheme.omega();
  const double x = omega / std::sqrt(tau2);
  const double density = normal_pdf(x) + normal_pdf(-x);
  const double dens2 = density * density;
  est.variance = dens2 * (omega * omega / (4.0 * tau2 * tau2 * tau2)) * var_of_variance;
  est.variance_alt_factor = dens2 * (omega * omega / (4.0 * tau2)) * var_of_variance;
  fill_interval(est);
  return est;
}

double default_variance_of_variance(double variance_estimate, std::size_t n) {
  require_non_negative(variance_estimate, "variance estimate");
  if (n < 2) {
    throw Error(ErrorCode::insufficient_data,
                "variance of a variance estimate needs at least 2 observations");
  }
  return 2.0 * variance_estimate * variance_estimate / static_cast<double>(n - 1);
}

MseEstimate mse_estimate(double theta_star, double theta_audit, double audit_variance) {
  require_non_negative(audit_variance, "audit variance");
  const double diff = theta_star - theta_audit;
  const double value = diff * diff - audit_variance;
  return {value, value < 0.0};
}

BreakEven break_even_variance_for_coverage(double target_coverage, const EvalScheme& scheme) {
  if (!(target_coverage > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "target coverage must be positive");
  }
  BreakEven out;
  out.target_coverage = target_coverage;
  const double at_zero = coverage_of_unbiased(0.0, scheme);
  if (target_coverage >= at_zero) {
    out.target_at_or_above_alpha = true;
    out.residual = at_zero - target_coverage;
    return out;
  }
  auto f = [&](double v) { return coverage_of_unbiased(v, scheme) - target_coverage; };
  double hi = scheme.sigma() * scheme.sigma();
  while (f(hi) > 0.0) {
    hi *= 4.0;
    if (!std::isfinite(hi)) {
      throw Error(ErrorCode::invalid_argument, "break-even variance could not be bracketed");
    }
  }
  const RootResult r = bisect(f, 0.0, hi, {0.0, 1e-14, 4000});
  out.variance = r.root;
  out.residual = r.residual;
  out.iterations = r.iterations;
  return out;
}

BreakEven break_even_variance(double theta_star, double theta_true, const EvalScheme& scheme) {
  return break_even_variance_for_coverage(coverage_of_constant(theta_star, theta_true, scheme),
                                          scheme);
}

}  // namespace auditcov
