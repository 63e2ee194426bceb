#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace auditcov {

/// Machine-readable failure categories. Each maps onto one CLI exit status.
enum class ErrorCode {
  invalid_argument,    // bad parameter value (alpha outside (0,1), negative variance, ...)
  dimension_mismatch,  // vectors/matrices/labels of incompatible size
  invalid_period,      // period index or label out of range
  zero_division,       // relative weight difference against a zero proxy weight
  degenerate_test,     // test variance or regression denominator is zero
  insufficient_data,   // too few households / periods for the requested estimate
  schema_violation,    // input file does not match its documented layout
  unknown_label,       // group / source / stratum label not present
  io_error,            // file cannot be opened or written
  usage,               // command line misuse
  verification_failed  // Monte Carlo oracle rejected a closed form
};

std::string_view to_string(ErrorCode code) noexcept;

/// CLI exit status: 1 usage/config, 2 data, 3 verification failure.
int exit_status(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace auditcov
