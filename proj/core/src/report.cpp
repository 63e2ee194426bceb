#include "auditcov/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "auditcov/error.hpp"

namespace auditcov {

using nlohmann::json;

#ifndef AUDITCOV_VERSION
#define AUDITCOV_VERSION "0.0.0"
#endif

std::string_view tool_version() noexcept { return AUDITCOV_VERSION; }

namespace {

json cell_to_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return nullptr;
          return v;
        } else {
          return v;
        }
      },
      c);
}

Cell cell_from_json(const json& j) {
  switch (j.type()) {
    case json::value_t::null: return std::monostate{};
    case json::value_t::boolean: return j.get<bool>();
    case json::value_t::number_integer: return j.get<std::int64_t>();
    case json::value_t::number_unsigned: return static_cast<std::int64_t>(j.get<std::uint64_t>());
    case json::value_t::number_float: return j.get<double>();
    case json::value_t::string: return j.get<std::string>();
    default:
      throw Error(ErrorCode::schema_violation, "report cell must be a scalar");
  }
}

json to_json(const ReportDocument& doc) {
  json j;
  j["schema_version"] = doc.schema_version;
  j["tool_version"] = doc.tool_version;
  j["command"] = doc.command;
  j["status"] = doc.status;
  j["config"] = doc.config;
  j["warnings"] = doc.warnings;
  json sections = json::array();
  for (const auto& s : doc.sections) {
    json js;
    js["name"] = s.name;
    json cols = json::array();
    for (const auto& c : s.columns) cols.push_back({{"name", c.name}, {"decimals", c.decimals}});
    js["columns"] = std::move(cols);
    json rows = json::array();
    for (const auto& r : s.rows) {
      json row = json::array();
      for (const auto& c : r) row.push_back(cell_to_json(c));
      rows.push_back(std::move(row));
    }
    js["rows"] = std::move(rows);
    sections.push_back(std::move(js));
  }
  j["sections"] = std::move(sections);
  if (doc.error) {
    j["error"] = {{"code", doc.error->code}, {"message", doc.error->message}};
  } else {
    j["error"] = nullptr;
  }
  return j;
}

std::string format_double(double v, int decimals) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[64];
  if (decimals >= 0) {
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  } else {
    std::snprintf(buf, sizeof buf, "%.6g", v);
  }
  return buf;
}

std::string format_cell(const Cell& c, int decimals) {
  return std::visit(
      [decimals](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "-";
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "yes" : "no";
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, double>) {
          return format_double(v, decimals);
        } else {
          return v;
        }
      },
      c);
}

bool is_numeric(const Cell& c) {
  return std::holds_alternative<double>(c) || std::holds_alternative<std::int64_t>(c);
}

std::string render_table(const ReportDocument& doc) {
  std::ostringstream os;
  os << "auditcov " << doc.tool_version << "  command: " << doc.command
     << "  status: " << doc.status << "\n";
  for (const auto& [k, v] : doc.config) os << "  " << k << " = " << v << "\n";
  for (const auto& w : doc.warnings) os << "warning: " << w << "\n";
  if (doc.error) os << "error [" << doc.error->code << "]: " << doc.error->message << "\n";

  for (const auto& s : doc.sections) {
    os << "\n" << s.name << "\n";
    const std::size_t nc = s.columns.size();
    std::vector<std::vector<std::string>> cells;
    std::vector<std::size_t> width(nc, 0);
    std::vector<bool> right(nc, false);
    for (std::size_t c = 0; c < nc; ++c) width[c] = s.columns[c].name.size();
    for (const auto& r : s.rows) {
      std::vector<std::string> line;
      for (std::size_t c = 0; c < nc; ++c) {
        const Cell& cell = c < r.size() ? r[c] : Cell{};
        line.push_back(format_cell(cell, s.columns[c].decimals));
        width[c] = std::max(width[c], line.back().size());
        if (is_numeric(cell)) right[c] = true;
      }
      cells.push_back(std::move(line));
    }
    auto emit_line = [&](const std::vector<std::string>& line) {
      std::string out;
      for (std::size_t c = 0; c < nc; ++c) {
        const std::size_t pad = width[c] - line[c].size();
        if (c > 0) out += "  ";
        if (right[c]) out.append(pad, ' ');
        out += line[c];
        if (!right[c] && c + 1 < nc) out.append(pad, ' ');
      }
      while (!out.empty() && out.back() == ' ') out.pop_back();
      os << out << "\n";
    };
    std::vector<std::string> head;
    for (const auto& c : s.columns) head.push_back(c.name);
    emit_line(head);
    std::size_t total = 0;
    for (std::size_t c = 0; c < nc; ++c) total += width[c] + (c > 0 ? 2 : 0);
    os << std::string(total, '-') << "\n";
    for (const auto& line : cells) emit_line(line);
  }
  return os.str();
}

}  // namespace

std::string emit_report(const ReportDocument& doc, OutputFormat format) {
  if (format == OutputFormat::table) return render_table(doc);
  return to_json(doc).dump(2) + "\n";
}

ReportDocument parse_machine_report(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::schema_violation, std::string("report is not valid JSON: ") + e.what());
  }
  try {
    ReportDocument doc;
    doc.schema_version = j.at("schema_version").get<int>();
    if (doc.schema_version > kReportSchemaVersion) {
      throw Error(ErrorCode::schema_violation,
                  "report schema version " + std::to_string(doc.schema_version) +
                      " is newer than supported version " +
                      std::to_string(kReportSchemaVersion));
    }
    doc.tool_version = j.at("tool_version").get<std::string>();
    doc.command = j.at("command").get<std::string>();
    doc.status = j.at("status").get<std::string>();
    doc.config = j.at("config").get<std::map<std::string, std::string>>();
    doc.warnings = j.at("warnings").get<std::vector<std::string>>();
    for (const auto& js : j.at("sections")) {
      ReportSection s;
      s.name = js.at("name").get<std::string>();
      for (const auto& jc : js.at("columns")) {
        s.columns.push_back({jc.at("name").get<std::string>(), jc.at("decimals").get<int>()});
      }
      for (const auto& jr : js.at("rows")) {
        std::vector<Cell> row;
        for (const auto& jcell : jr) row.push_back(cell_from_json(jcell));
        s.rows.push_back(std::move(row));
      }
      doc.sections.push_back(std::move(s));
    }
    if (j.contains("error") && !j.at("error").is_null()) {
      doc.error = ReportError{j["error"].at("code").get<std::string>(),
                              j["error"].at("message").get<std::string>()};
    }
    return doc;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::schema_violation, std::string("malformed report: ") + e.what());
  }
}

void write_report(const ReportDocument& doc, OutputFormat format,
                  const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::io_error, "cannot write report to '" + path.string() + "'");
  }
  out << emit_report(doc, format);
  if (!out) {
    throw Error(ErrorCode::io_error, "failed while writing '" + path.string() + "'");
  }
}

}  // namespace auditcov
