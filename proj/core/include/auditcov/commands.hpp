#pragma once

// Command dispatch behind the auditcov executable: input loading, the
// analysis workflows and their report documents.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "auditcov/index_core.hpp"
#include "auditcov/report.hpp"
#include "auditcov/survey_estimation.hpp"

namespace auditcov {

enum class Command { ztest, btest, coverage, mse, simulate, verify, report };

std::string_view to_string(Command c) noexcept;
/// Throws usage for an unknown name.
Command command_from_string(std::string_view name);

struct RunConfig {
  Command command = Command::report;

  std::filesystem::path prices;
  std::filesystem::path proxy_weights;
  /// Exactly one of survey_micro / weight_estimate feeds the survey side.
  std::filesystem::path survey_micro;
  std::filesystem::path weight_estimate;

  double alpha = 0.95;
  /// Half-width in index units, or a multiple of the median audit standard
  /// error over the selected periods. Neither set means omega_se_mult = 2.
  std::optional<double> omega;
  std::optional<double> omega_se_mult;

  /// Survey (g) and proxy (g') selectors. Empty lists pair every survey
  /// group with the proxy set of the same label, or with every proxy set
  /// when no labels match.
  std::vector<std::string> survey_groups;
  std::vector<std::string> proxy_groups;

  std::optional<std::string> period_from;
  std::optional<std::string> period_to;
  bool per_period = false;

  std::uint64_t seed = 42;
  unsigned threads = 0;
  double replicate_scale = 1.0;

  // simulate
  std::optional<std::string> truth_source;
  std::size_t households = 1000;
  double dispersion = 0.6;
  std::filesystem::path micro_out;

  std::filesystem::path output;  // empty: stdout
  OutputFormat format = OutputFormat::table;
};

struct ParsedInputs {
  PriceSeries prices;
  std::map<std::string, WeightVector> proxies;
  std::map<std::string, WeightEstimate> surveys;
  std::vector<std::string> warnings;
  bool survey_from_micro = false;
};

/// Loads and cross-validates the files a command needs.
ParsedInputs parse_inputs(const RunConfig& config);

/// Runs the command. Domain and input errors do not escape: they come back
/// as a document with status "error" and a machine-readable code.
ReportDocument run_command(const RunConfig& config);

/// 0 ok, 3 verification failure, otherwise the status mapped from the
/// error code (1 usage/config, 2 data).
int report_exit_status(const ReportDocument& doc) noexcept;

/// Environment variable naming the directory for relative output paths.
inline constexpr const char* kOutputDirEnv = "AUDITCOV_OUTPUT_DIR";

/// Resolves a relative output path against $AUDITCOV_OUTPUT_DIR when set.
std::filesystem::path resolve_output_path(const std::filesystem::path& path);

}  // namespace auditcov
