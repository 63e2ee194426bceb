#pragma once

// Standard normal distribution helpers.
//
// The CDF is evaluated through the C library's complementary error function,
// Phi(x) = erfc(-x / sqrt(2)) / 2, which keeps full relative precision in both
// tails (absolute error well below 1e-15 over the real line). The quantile is
// obtained by bisection on that same CDF, so Phi(quantile(p)) == p up to the
// last representable bracket.

namespace auditcov {

double normal_pdf(double x) noexcept;
double normal_cdf(double x) noexcept;
/// Upper tail 1 - Phi(x), computed without cancellation.
double normal_sf(double x) noexcept;
/// Phi^{-1}(p) for p in (0, 1).
double normal_quantile(double p);
/// 2 * (1 - Phi(|z|)).
double two_sided_p_value(double z) noexcept;

}  // namespace auditcov
