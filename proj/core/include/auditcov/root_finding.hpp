#pragma once

#include <cmath>
#include <cstddef>

#include "auditcov/error.hpp"

namespace auditcov {

struct BisectionOptions {
  double abs_tol = 0.0;
  double rel_tol = 1e-15;
  std::size_t max_iterations = 2000;
};

struct RootResult {
  double root = 0.0;
  double residual = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Bisection on a bracket [lo, hi] where f(lo) and f(hi) have opposite signs
/// (or one of them is zero). Terminates when the bracket width falls below
/// abs_tol + rel_tol * |midpoint|, when f vanishes exactly, or when the
/// bracket can no longer be split in double precision.
template <typename F>
RootResult bisect(F&& f, double lo, double hi, const BisectionOptions& opts = {}) {
  if (!(lo < hi)) {
    throw Error(ErrorCode::invalid_argument, "bisect: empty bracket");
  }
  double f_lo = f(lo);
  double f_hi = f(hi);
  if (f_lo == 0.0) return {lo, 0.0, 0, true};
  if (f_hi == 0.0) return {hi, 0.0, 0, true};
  if (std::signbit(f_lo) == std::signbit(f_hi)) {
    throw Error(ErrorCode::invalid_argument, "bisect: bracket does not straddle a root");
  }

  RootResult out;
  for (std::size_t it = 0; it < opts.max_iterations; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    out.iterations = it + 1;
    if (mid <= lo || mid >= hi) {
      out.converged = true;
      break;
    }
    const double f_mid = f(mid);
    if (f_mid == 0.0) {
      return {mid, 0.0, out.iterations, true};
    }
    if (std::signbit(f_mid) == std::signbit(f_lo)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
      f_hi = f_mid;
    }
    if (hi - lo <= opts.abs_tol + opts.rel_tol * std::fabs(lo + 0.5 * (hi - lo))) {
      out.converged = true;
      break;
    }
  }
  // Report the endpoint with the smaller residual.
  if (std::fabs(f_lo) <= std::fabs(f_hi)) {
    out.root = lo;
    out.residual = f_lo;
  } else {
    out.root = hi;
    out.residual = f_hi;
  }
  return out;
}

}  // namespace auditcov
