#pragma once

// Minimal RFC 4180-style CSV reader/writer: mandatory header row, ','
// separator, optional double-quoted fields with "" escapes, LF or CRLF line
// endings, UTF-8 (a leading BOM is skipped). Blank lines are ignored.

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace auditcov {

struct CsvRow {
  std::size_t line = 0;  // 1-based physical line number
  std::vector<std::string> fields;
};

struct CsvTable {
  std::string source;  // file name used in diagnostics
  std::vector<std::string> header;
  std::vector<CsvRow> rows;

  /// Index of a header column; schema_violation when absent.
  std::size_t column(std::string_view name) const;
  /// Index of an optional header column, or npos.
  std::size_t find_column(std::string_view name) const noexcept;

  /// "<source>:<line>:<column>" prefix for diagnostics (column is 1-based).
  std::string where(const CsvRow& row, std::size_t col) const;
  /// Parses a finite double from a cell, with a located diagnostic.
  double number(const CsvRow& row, std::size_t col) const;
  const std::string& text(const CsvRow& row, std::size_t col) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

CsvTable parse_csv(std::string_view content, std::string source);
CsvTable read_csv(const std::filesystem::path& path);

/// Quotes a field when it contains ',', '"' or a line break.
std::string csv_escape(std::string_view field);

}  // namespace auditcov
