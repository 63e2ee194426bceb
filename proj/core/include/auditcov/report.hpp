#pragma once

// Report documents. A document is metadata plus a list of named tables; the
// machine format is schema-versioned JSON with sorted keys, two-space indent
// and a trailing newline, so serialize -> parse -> serialize is byte-stable.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace auditcov {

inline constexpr int kReportSchemaVersion = 1;

enum class OutputFormat { machine, table };

/// Empty cell, flag, count, real or text.
using Cell = std::variant<std::monostate, bool, std::int64_t, double, std::string>;

struct Column {
  std::string name;
  /// Fixed decimals in the table format; -1 prints the shortest round-trip form.
  int decimals = -1;

  bool operator==(const Column&) const = default;
};

struct ReportSection {
  std::string name;
  std::vector<Column> columns;
  std::vector<std::vector<Cell>> rows;

  bool operator==(const ReportSection&) const = default;
};

struct ReportError {
  std::string code;
  std::string message;

  bool operator==(const ReportError&) const = default;
};

struct ReportDocument {
  int schema_version = kReportSchemaVersion;
  std::string tool_version;
  std::string command;
  std::string status = "ok";  // ok | verification_failed | error
  std::map<std::string, std::string> config;
  std::vector<std::string> warnings;
  std::vector<ReportSection> sections;
  std::optional<ReportError> error;

  bool operator==(const ReportDocument&) const = default;
};

std::string_view tool_version() noexcept;

std::string emit_report(const ReportDocument& doc, OutputFormat format);

/// Inverse of emit_report(doc, OutputFormat::machine). Rejects documents whose
/// schema_version is newer than this build understands.
ReportDocument parse_machine_report(std::string_view text);

/// Writes the rendered report; io_error when the path cannot be written.
void write_report(const ReportDocument& doc, OutputFormat format,
                  const std::filesystem::path& path);

}  // namespace auditcov
