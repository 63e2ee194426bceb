#include "auditcov/csv.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "auditcov/error.hpp"

namespace auditcov {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t')) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

std::size_t CsvTable::find_column(std::string_view name) const noexcept {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return npos;
}

std::size_t CsvTable::column(std::string_view name) const {
  const std::size_t i = find_column(name);
  if (i == npos) {
    throw Error(ErrorCode::schema_violation,
                source + ":1: missing required column '" + std::string(name) + "'");
  }
  return i;
}

std::string CsvTable::where(const CsvRow& row, std::size_t col) const {
  return source + ":" + std::to_string(row.line) + ":" + std::to_string(col + 1);
}

const std::string& CsvTable::text(const CsvRow& row, std::size_t col) const {
  if (col >= row.fields.size()) {
    throw Error(ErrorCode::schema_violation, where(row, col) + ": missing field");
  }
  return row.fields[col];
}

double CsvTable::number(const CsvRow& row, std::size_t col) const {
  const std::string& s = text(row, col);
  if (s.empty()) {
    throw Error(ErrorCode::schema_violation, where(row, col) + ": empty numeric field");
  }
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) {
    throw Error(ErrorCode::schema_violation,
                where(row, col) + ": '" + s + "' is not a finite number");
  }
  return v;
}

CsvTable parse_csv(std::string_view content, std::string source) {
  CsvTable table;
  table.source = std::move(source);
  if (content.substr(0, 3) == "\xEF\xBB\xBF") content.remove_prefix(3);

  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;      // inside quotes
  bool was_quoted = false;  // current field started with a quote
  std::size_t line = 1;
  std::size_t record_line = 1;

  auto end_field = [&]() {
    fields.push_back(was_quoted ? field : trim(field));
    field.clear();
    was_quoted = false;
  };
  auto end_record = [&]() {
    end_field();
    const bool blank = fields.size() == 1 && fields[0].empty();
    if (!blank) {
      if (table.header.empty()) {
        table.header = std::move(fields);
      } else {
        if (fields.size() != table.header.size()) {
          throw Error(ErrorCode::schema_violation,
                      table.source + ":" + std::to_string(record_line) + ": expected " +
                          std::to_string(table.header.size()) + " fields, found " +
                          std::to_string(fields.size()));
        }
        table.rows.push_back({record_line, std::move(fields)});
      }
    }
    fields.clear();
  };

  for (std::size_t i = 0; i < content.size(); ++i) {
    const char c = content[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < content.size() && content[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!trim(field).empty()) {
          throw Error(ErrorCode::schema_violation,
                      table.source + ":" + std::to_string(line) + ": stray quote inside field");
        }
        field.clear();
        quoted = true;
        was_quoted = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        break;
      case '\n':
        end_record();
        ++line;
        record_line = line;
        break;
      default:
        field.push_back(c);
    }
  }
  if (quoted) {
    throw Error(ErrorCode::schema_violation,
                table.source + ":" + std::to_string(line) + ": unterminated quoted field");
  }
  if (!field.empty() || !fields.empty()) end_record();
  if (table.header.empty()) {
    throw Error(ErrorCode::schema_violation, table.source + ": missing header row");
  }
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::io_error, "cannot open '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), path.filename().string());
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace auditcov
