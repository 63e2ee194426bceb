#include "auditcov/error.hpp"

namespace auditcov {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::invalid_period: return "invalid_period";
    case ErrorCode::zero_division: return "zero_division";
    case ErrorCode::degenerate_test: return "degenerate_test";
    case ErrorCode::insufficient_data: return "insufficient_data";
    case ErrorCode::schema_violation: return "schema_violation";
    case ErrorCode::unknown_label: return "unknown_label";
    case ErrorCode::io_error: return "io_error";
    case ErrorCode::usage: return "usage";
    case ErrorCode::verification_failed: return "verification_failed";
  }
  return "unknown";
}

int exit_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::usage:
    case ErrorCode::invalid_argument:
      return 1;
    case ErrorCode::verification_failed:
      return 3;
    default:
      return 2;
  }
}

}  // namespace auditcov
