#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "auditcov/error.hpp"
#include "auditcov/report.hpp"

using namespace auditcov;

namespace {

ReportDocument sample_document() {
  ReportDocument doc;
  doc.tool_version = std::string(tool_version());
  doc.command = "ztest";
  doc.config = {{"prices", "p.csv"}, {"alpha", "0.95"}};
  doc.warnings = {"weights of source 'card' summed to 0.999; renormalized to 1"};
  ReportSection s;
  s.name = "tests";
  s.columns = {{"survey"}, {"periods"}, {"statistic", 4}, {"p_value", 3}, {"slope", 6}, {"flag"}};
  s.rows.push_back({std::string("4"), std::int64_t{36}, 0.03803, 0.9696637627822763,
                    std::monostate{}, false});
  s.rows.push_back({std::string("q\"uoted, text"), std::int64_t{-3}, 2.6122, 0.008996160878494843,
                    1.0861, true});
  s.rows.push_back({std::string("tiny"), std::int64_t{0}, 1e-300, 0.1 + 0.2, 2.0, true});
  doc.sections.push_back(s);
  return doc;
}

}  // namespace

TEST(Report, EmptyDocumentIsAValidSkeleton) {
  ReportDocument doc;
  doc.tool_version = "0.1.0";
  doc.command = "verify";
  const std::string text = emit_report(doc, OutputFormat::machine);
  EXPECT_EQ(text.back(), '\n');
  EXPECT_NE(text.find("\"schema_version\": 1"), std::string::npos);
  EXPECT_NE(text.find("\"sections\": []"), std::string::npos);
  EXPECT_EQ(parse_machine_report(text), doc);
  EXPECT_FALSE(emit_report(doc, OutputFormat::table).empty());
}

TEST(Report, MachineFormatRoundTripsByteForByte) {
  const ReportDocument doc = sample_document();
  const std::string once = emit_report(doc, OutputFormat::machine);
  const ReportDocument parsed = parse_machine_report(once);
  EXPECT_EQ(parsed, doc);
  EXPECT_EQ(emit_report(parsed, OutputFormat::machine), once);
}

TEST(Report, ErrorDocumentsRoundTrip) {
  ReportDocument doc;
  doc.command = "coverage";
  doc.status = "error";
  doc.error = ReportError{"schema_violation", "prices.csv:4:3: price index must be positive"};
  const std::string text = emit_report(doc, OutputFormat::machine);
  EXPECT_EQ(parse_machine_report(text), doc);
  EXPECT_NE(emit_report(doc, OutputFormat::table).find("error [schema_violation]"), std::string::npos);
}

TEST(Report, KeysAreSorted) {
  const std::string text = emit_report(sample_document(), OutputFormat::machine);
  const auto pos = [&](const char* key) { return text.find(std::string("\"") + key + "\":"); };
  EXPECT_LT(pos("command"), pos("config"));
  EXPECT_LT(pos("config"), pos("error"));
  EXPECT_LT(pos("error"), pos("schema_version"));
  EXPECT_LT(pos("schema_version"), pos("sections"));
  EXPECT_LT(pos("status"), pos("tool_version"));
  EXPECT_LT(pos("tool_version"), pos("warnings"));
}

TEST(Report, NonFiniteNumbersBecomeNull) {
  ReportDocument doc;
  ReportSection s;
  s.name = "x";
  s.columns = {{"v"}};
  s.rows.push_back({std::numeric_limits<double>::quiet_NaN()});
  doc.sections.push_back(s);
  const auto parsed = parse_machine_report(emit_report(doc, OutputFormat::machine));
  EXPECT_TRUE(std::holds_alternative<std::monostate>(parsed.sections[0].rows[0][0]));
}

TEST(Report, TableFormatUsesColumnDecimals) {
  const std::string table = emit_report(sample_document(), OutputFormat::table);
  EXPECT_NE(table.find("0.970"), std::string::npos) << table;
  EXPECT_NE(table.find("0.009"), std::string::npos) << table;
  EXPECT_NE(table.find("0.0380"), std::string::npos) << table;
  EXPECT_NE(table.find("1.086100"), std::string::npos) << table;
  EXPECT_EQ(table.find("0.96966"), std::string::npos) << table;
  // Each section header is followed by a dashed rule.
  std::istringstream in(table);
  std::string line, rule;
  while (std::getline(in, line)) {
    if (!line.empty() && line.find_first_not_of('-') == std::string::npos) rule = line;
  }
  EXPECT_FALSE(rule.empty());
}

TEST(Report, RejectsNewerSchemaAndMalformedInput) {
  std::string text = emit_report(sample_document(), OutputFormat::machine);
  const auto at = text.find("\"schema_version\": 1");
  text.replace(at, 19, "\"schema_version\": 2");
  EXPECT_THROW(parse_machine_report(text), Error);
  EXPECT_THROW(parse_machine_report("{not json"), Error);
  EXPECT_THROW(parse_machine_report("{}"), Error);
}

TEST(Report, WriteReportFailsOnUnwritablePath) {
  try {
    write_report(sample_document(), OutputFormat::machine, "/nonexistent-dir/x/report.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::io_error);
  }
  const auto path = std::filesystem::temp_directory_path() / "auditcov_report_test.json";
  write_report(sample_document(), OutputFormat::machine, path);
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  EXPECT_EQ(ss.str(), emit_report(sample_document(), OutputFormat::machine));
  std::filesystem::remove(path);
}
