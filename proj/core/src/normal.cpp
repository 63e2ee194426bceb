#include "auditcov/normal.hpp"

#include <cmath>
#include <string>

#include "auditcov/error.hpp"
#include "auditcov/root_finding.hpp"

namespace auditcov {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
}  // namespace

double normal_pdf(double x) noexcept { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x * kInvSqrt2); }

double normal_sf(double x) noexcept { return 0.5 * std::erfc(x * kInvSqrt2); }

double two_sided_p_value(double z) noexcept {
  if (std::isnan(z)) return z;
  return std::erfc(std::fabs(z) * kInvSqrt2);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorCode::invalid_argument,
                "normal_quantile: probability must lie in (0,1), got " + std::to_string(p));
  }
  if (p == 0.5) return 0.0;
  // Work in the lower tail for accuracy, reflect for p > 1/2.
  const bool upper = p > 0.5;
  const double q = upper ? 1.0 - p : p;
  // Phi(-40) underflows to ~0, so [-40, 0] brackets every representable tail.
  auto f = [q](double x) { return normal_cdf(x) - q; };
  const RootResult r = bisect(f, -40.0, 0.0, {0.0, 1e-16, 4000});
  return upper ? -r.root : r.root;
}

}  // namespace auditcov
