#include "auditcov/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <set>

#include "auditcov/csv.hpp"
#include "auditcov/error.hpp"
#include "auditcov/evaluation_coverage.hpp"
#include "auditcov/hypothesis_tests.hpp"
#include "auditcov/inputs.hpp"
#include "auditcov/montecarlo_oracle.hpp"

namespace auditcov {

namespace {

constexpr std::pair<Command, std::string_view> kCommandNames[] = {
    {Command::ztest, "ztest"},       {Command::btest, "btest"},
    {Command::coverage, "coverage"}, {Command::mse, "mse"},
    {Command::simulate, "simulate"}, {Command::verify, "verify"},
    {Command::report, "report"},
};

std::string shortest(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

Cell opt_cell(const std::optional<double>& v) {
  if (v) return *v;
  return std::monostate{};
}

Cell count_cell(std::size_t n) { return static_cast<std::int64_t>(n); }

std::map<std::string, std::string> echo_config(const RunConfig& c) {
  std::map<std::string, std::string> out;
  auto path = [&](const char* key, const std::filesystem::path& p) {
    if (!p.empty()) out[key] = p.generic_string();
  };
  auto list = [&](const char* key, const std::vector<std::string>& v) {
    if (v.empty()) return;
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : ",") + x;
    out[key] = s;
  };
  switch (c.command) {
    case Command::verify:
      out["seed"] = std::to_string(c.seed);
      out["replicate_scale"] = shortest(c.replicate_scale);
      return out;
    case Command::simulate:
      path("prices", c.prices);
      path("proxy_weights", c.proxy_weights);
      path("micro_out", c.micro_out);
      if (c.truth_source) out["truth_source"] = *c.truth_source;
      out["households"] = std::to_string(c.households);
      out["dispersion"] = shortest(c.dispersion);
      out["seed"] = std::to_string(c.seed);
      return out;
    default:
      break;
  }
  path("prices", c.prices);
  path("proxy_weights", c.proxy_weights);
  path("survey_micro", c.survey_micro);
  path("weight_estimate", c.weight_estimate);
  list("survey_groups", c.survey_groups);
  list("proxy_groups", c.proxy_groups);
  if (c.period_from) out["period_from"] = *c.period_from;
  if (c.period_to) out["period_to"] = *c.period_to;
  if (c.command == Command::ztest || c.command == Command::report) {
    out["per_period"] = c.per_period ? "true" : "false";
  }
  if (c.command == Command::coverage || c.command == Command::report) {
    out["alpha"] = shortest(c.alpha);
    if (c.omega) out["omega"] = shortest(*c.omega);
    if (c.omega_se_mult) out["omega_se_mult"] = shortest(*c.omega_se_mult);
  }
  return out;
}

PeriodSet selected_periods(const RunConfig& c, const PriceSeries& prices) {
  std::size_t first = 0;
  std::size_t last = prices.periods() - 1;
  if (c.period_from) first = prices.period_index(*c.period_from);
  if (c.period_to) last = prices.period_index(*c.period_to);
  if (first > last) {
    throw Error(ErrorCode::invalid_period,
                "period range is empty: '" + prices.period_labels()[first] + "' comes after '" +
                    prices.period_labels()[last] + "'");
  }
  PeriodSet set(last - first + 1);
  std::iota(set.begin(), set.end(), first);
  return set;
}

std::vector<BatteryPair> selected_pairs(const RunConfig& c, const ParsedInputs& in) {
  std::vector<std::string> gs = c.survey_groups;
  if (gs.empty()) {
    for (const auto& [k, v] : in.surveys) gs.push_back(k);
  }
  for (const auto& g : gs) {
    if (!in.surveys.count(g)) {
      throw Error(ErrorCode::unknown_label, "no survey weights for group selector '" + g + "'");
    }
  }
  for (const auto& g : c.proxy_groups) {
    if (!in.proxies.count(g)) {
      throw Error(ErrorCode::unknown_label, "no proxy weights for group selector '" + g + "'");
    }
  }
  std::vector<BatteryPair> pairs;
  auto cartesian = [&](const std::vector<std::string>& proxies) {
    for (const auto& g : gs) {
      for (const auto& h : proxies) pairs.push_back({g, h});
    }
  };
  if (!c.proxy_groups.empty()) {
    cartesian(c.proxy_groups);
    return pairs;
  }
  for (const auto& g : gs) {
    if (in.proxies.count(g)) pairs.push_back({g, g});
  }
  if (pairs.empty()) {
    std::vector<std::string> all;
    for (const auto& [k, v] : in.proxies) all.push_back(k);
    cartesian(all);
  }
  return pairs;
}

ReportSection test_section(const std::vector<TestResult>& results) {
  ReportSection s;
  s.name = "tests";
  s.columns = {{"survey"}, {"proxy"},       {"test"},        {"first"},
               {"last"},   {"periods"},     {"effect", 6},   {"statistic", 4},
               {"p_value", 3}, {"slope", 6}, {"variance", -1}};
  for (const auto& r : results) {
    s.rows.push_back({r.survey_label, r.proxy_label, std::string(to_string(r.kind)),
                      r.period_first, r.period_last, count_cell(r.period_count), r.effect,
                      r.statistic, r.p_value, opt_cell(r.slope), r.variance});
  }
  return s;
}

std::vector<TestResult> run_battery(const RunConfig& c, const ParsedInputs& in,
                                    std::optional<TestKind> only) {
  BatteryOptions options;
  options.period_sets = {selected_periods(c, in.prices)};
  options.per_period = c.per_period && only != TestKind::B;
  auto results = cross_group_battery(in.prices, in.surveys, in.proxies, selected_pairs(c, in),
                                     options);
  if (only) {
    std::erase_if(results, [&](const TestResult& r) { return r.kind != *only; });
  }
  return results;
}

// Sample quantile with linear interpolation between order statistics.
double quantile(const std::vector<double>& sorted, double q) {
  const double h = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

struct PeriodAudit {
  std::size_t t;
  double proxy_index;
  double survey_index;
  double audit_variance;
};

std::vector<PeriodAudit> audit_periods(const ParsedInputs& in, const BatteryPair& pair,
                                       const PeriodSet& periods) {
  const WeightEstimate& est = in.surveys.at(pair.survey_group);
  const WeightVector& proxy = in.proxies.at(pair.proxy_group);
  std::vector<PeriodAudit> out;
  for (std::size_t t : periods) {
    out.push_back({t, weighted_index(in.prices, proxy, t),
                   weighted_index(in.prices, est.point, t), index_variance(in.prices, est, t)});
  }
  return out;
}

void append_coverage(const RunConfig& c, const ParsedInputs& in, ReportDocument& doc) {
  const PeriodSet periods = selected_periods(c, in.prices);
  const auto pairs = selected_pairs(c, in);

  ReportSection rows;
  rows.name = "coverage";
  rows.columns = {{"survey"},           {"proxy"},           {"period"},
                  {"omega", 6},         {"proxy_index", 4},  {"survey_index", 4},
                  {"audit_se", 6},      {"c_star", 3},       {"c_star_se", 6},
                  {"ci_low", 3},        {"ci_high", 3},      {"ci_clipped"},
                  {"c_s", 3},           {"c_s_se", 6},       {"c_s_se_alt", 6},
                  {"break_even_se_ratio", 4}};
  ReportSection summary;
  summary.name = "coverage_summary";
  summary.columns = {{"survey"}, {"proxy"}, {"statistic"}, {"c_star", 3}, {"c_s", 3}};

  std::size_t clipped = 0;
  bool missing_n = false;
  for (const auto& pair : pairs) {
    const WeightEstimate& est = in.surveys.at(pair.survey_group);
    const auto audits = audit_periods(in, pair, periods);

    double omega = 0.0;
    if (c.omega) {
      omega = *c.omega;
    } else {
      std::vector<double> se;
      for (const auto& a : audits) se.push_back(std::sqrt(a.audit_variance));
      std::sort(se.begin(), se.end());
      omega = c.omega_se_mult.value_or(2.0) * quantile(se, 0.5);
    }
    const EvalScheme scheme = EvalScheme::create(c.alpha, omega);

    std::vector<double> c_star_values;
    std::vector<double> c_s_values;
    for (const auto& a : audits) {
      const CoverageEstimate cs =
          estimate_coverage(a.proxy_index, a.survey_index, a.audit_variance, scheme);
      std::optional<CoverageEstimate> bench;
      if (est.n_households >= 2) {
        bench = estimate_unbiased_coverage(
            a.audit_variance, default_variance_of_variance(a.audit_variance, est.n_households),
            scheme);
      } else {
        missing_n = true;
      }
      const double c_s = bench ? bench->value : coverage_of_unbiased(a.audit_variance, scheme);
      const BreakEven be = break_even_variance(a.proxy_index, a.survey_index, scheme);
      const double se = std::sqrt(a.audit_variance);
      std::optional<double> ratio;
      if (se > 0.0) ratio = std::sqrt(be.variance) / se;
      if (cs.ci_clipped) ++clipped;

      std::optional<double> c_s_se;
      std::optional<double> c_s_se_alt;
      if (bench) {
        c_s_se = std::sqrt(bench->variance);
        c_s_se_alt = std::sqrt(*bench->variance_alt_factor);
      }
      rows.rows.push_back({pair.survey_group, pair.proxy_group, in.prices.period_labels()[a.t],
                           omega, a.proxy_index, a.survey_index, se, cs.value,
                           std::sqrt(cs.variance), cs.ci_low, cs.ci_high, cs.ci_clipped, c_s,
                           opt_cell(c_s_se), opt_cell(c_s_se_alt), opt_cell(ratio)});
      c_star_values.push_back(cs.value);
      c_s_values.push_back(c_s);
    }

    std::sort(c_star_values.begin(), c_star_values.end());
    std::sort(c_s_values.begin(), c_s_values.end());
    const std::pair<const char*, double> stats[] = {
        {"Minimum", 0.0}, {"First Quantile", 0.25}, {"Median", 0.5},
        {"Mean", -1.0},   {"Third Quantile", 0.75}, {"Maximum", 1.0}};
    for (const auto& [name, q] : stats) {
      const double a = q < 0.0 ? mean_of(c_star_values) : quantile(c_star_values, q);
      const double b = q < 0.0 ? mean_of(c_s_values) : quantile(c_s_values, q);
      summary.rows.push_back({pair.survey_group, pair.proxy_group, std::string(name), a, b});
    }
  }
  if (clipped > 0) {
    doc.warnings.push_back(std::to_string(clipped) +
                           " coverage interval(s) clipped to [0,1] (see ci_clipped)");
  }
  if (missing_n) {
    doc.warnings.push_back(
        "household count unknown for at least one survey set; c_s standard errors omitted");
  } else {
    doc.warnings.push_back(
        "c_s standard errors assume var(v_hat) = 2 v_hat^2 / (n - 1) (normal approximation)");
  }
  doc.sections.push_back(std::move(rows));
  doc.sections.push_back(std::move(summary));
}

void append_mse(const RunConfig& c, const ParsedInputs& in, ReportDocument& doc) {
  const PeriodSet periods = selected_periods(c, in.prices);
  ReportSection rows;
  rows.name = "mse";
  rows.columns = {{"survey"},         {"proxy"},         {"period"},       {"proxy_index", 4},
                  {"survey_index", 4}, {"audit_variance", -1}, {"mse", -1}, {"negative"}};
  ReportSection summary;
  summary.name = "mse_summary";
  summary.columns = {{"survey"}, {"proxy"}, {"periods"}, {"negative_periods"}, {"mean_mse", -1}};
  for (const auto& pair : selected_pairs(c, in)) {
    std::size_t negatives = 0;
    std::vector<double> values;
    for (const auto& a : audit_periods(in, pair, periods)) {
      const MseEstimate m = mse_estimate(a.proxy_index, a.survey_index, a.audit_variance);
      if (m.negative) ++negatives;
      values.push_back(m.value);
      rows.rows.push_back({pair.survey_group, pair.proxy_group, in.prices.period_labels()[a.t],
                           a.proxy_index, a.survey_index, a.audit_variance, m.value,
                           m.negative});
    }
    summary.rows.push_back({pair.survey_group, pair.proxy_group, count_cell(values.size()),
                            count_cell(negatives), mean_of(values)});
    if (negatives > 0) {
      doc.warnings.push_back("MSE estimate negative in " + std::to_string(negatives) + " of " +
                             std::to_string(values.size()) + " periods for (" +
                             pair.survey_group + ", " + pair.proxy_group + ")");
    }
  }
  doc.sections.push_back(std::move(rows));
  doc.sections.push_back(std::move(summary));
}

void append_verify(const RunConfig& c, ReportDocument& doc) {
  VerificationOptions options;
  options.seed = c.seed;
  options.threads = c.threads;
  options.replicate_scale = c.replicate_scale;
  const auto checks = run_verification_suite(options);

  ReportSection summary;
  summary.name = "checks";
  summary.columns = {{"check"}, {"rule"}, {"passed"}};
  ReportSection detail;
  detail.name = "outcomes";
  detail.columns = {{"check"},     {"label"},         {"point", 6},
                    {"mc_stderr", 6}, {"target", 6},  {"z_score", 3},
                    {"replicates"}, {"ks_distance", 4}, {"negative_fraction", 4},
                    {"relative_error", 4}, {"alt_target", 6}};
  bool all_passed = true;
  for (const auto& check : checks) {
    all_passed = all_passed && check.passed;
    summary.rows.push_back({check.name, check.rule, check.passed});
    for (const auto& o : check.outcomes) {
      detail.rows.push_back({check.name, o.label, o.point, o.mc_stderr, o.target, o.z_score,
                             count_cell(o.replicates_used), opt_cell(o.ks_distance),
                             opt_cell(o.negative_fraction), opt_cell(o.relative_error),
                             opt_cell(o.alt_target)});
    }
  }
  if (!all_passed) doc.status = "verification_failed";
  doc.sections.push_back(std::move(summary));
  doc.sections.push_back(std::move(detail));
}

void append_simulate(const RunConfig& c, ReportDocument& doc) {
  if (c.micro_out.empty()) {
    throw Error(ErrorCode::usage, "simulate needs an output path for the micro-data");
  }
  if (c.households < 2) {
    throw Error(ErrorCode::invalid_argument, "simulate needs at least 2 households");
  }
  if (!(c.dispersion > 0.0) || !std::isfinite(c.dispersion)) {
    throw Error(ErrorCode::invalid_argument, "dispersion must be positive");
  }
  const PriceSeries prices = prices_from_csv(read_csv(c.prices));
  const auto proxies = weights_from_csv(read_csv(c.proxy_weights), prices, doc.warnings);
  const std::string source = c.truth_source.value_or(proxies.begin()->first);
  const auto it = proxies.find(source);
  if (it == proxies.end()) {
    throw Error(ErrorCode::unknown_label, "no weights for source '" + source + "'");
  }
  const auto records = simulate_households(it->second, c.households, c.dispersion, c.seed);
  const std::filesystem::path out = resolve_output_path(c.micro_out);
  {
    std::ofstream f(out, std::ios::binary);
    f << micro_to_csv(records, prices.group_labels());
    if (!f) throw Error(ErrorCode::io_error, "cannot write '" + out.string() + "'");
  }
  const WeightEstimate est = estimate_weights(records, source);
  ReportSection s;
  s.name = "simulated_estimate";
  s.columns = {{"group"}, {"true_weight", 6}, {"estimate", 6}, {"se", 6}};
  for (std::size_t i = 0; i < prices.groups(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    s.rows.push_back({prices.group_labels()[i], it->second[i], est.point[i],
                      std::sqrt(std::max(0.0, est.covariance(k, k)))});
  }
  doc.sections.push_back(std::move(s));
  ReportSection meta;
  meta.name = "simulation";
  meta.columns = {{"households"}, {"dropped"}, {"micro_rows"}};
  meta.rows.push_back({count_cell(est.n_households), count_cell(est.dropped_households),
                       count_cell(records.size() * prices.groups())});
  doc.sections.push_back(std::move(meta));
}

}  // namespace

std::string_view to_string(Command c) noexcept {
  for (const auto& [cmd, name] : kCommandNames) {
    if (cmd == c) return name;
  }
  return "unknown";
}

Command command_from_string(std::string_view name) {
  for (const auto& [cmd, n] : kCommandNames) {
    if (n == name) return cmd;
  }
  throw Error(ErrorCode::usage, "unknown command '" + std::string(name) + "'");
}

ParsedInputs parse_inputs(const RunConfig& config) {
  if (config.prices.empty()) throw Error(ErrorCode::usage, "a prices file is required");
  if (config.proxy_weights.empty()) {
    throw Error(ErrorCode::usage, "a proxy weights file is required");
  }
  const bool micro = !config.survey_micro.empty();
  if (micro == !config.weight_estimate.empty()) {
    throw Error(ErrorCode::usage,
                "give exactly one of survey micro-data or a precomputed weight estimate");
  }
  ParsedInputs in{prices_from_csv(read_csv(config.prices)), {}, {}, {}, micro};
  in.proxies = weights_from_csv(read_csv(config.proxy_weights), in.prices, in.warnings);
  if (micro) {
    const auto records = micro_from_csv(read_csv(config.survey_micro), in.prices);
    in.surveys = estimate_by_stratum(records, in.warnings);
  } else {
    in.surveys = weight_estimates_from_csv(read_csv(config.weight_estimate), in.prices);
  }
  return in;
}

ReportDocument run_command(const RunConfig& config) {
  ReportDocument doc;
  doc.tool_version = std::string(tool_version());
  doc.command = std::string(to_string(config.command));
  doc.config = echo_config(config);
  try {
    if (config.command == Command::verify) {
      append_verify(config, doc);
      return doc;
    }
    if (config.command == Command::simulate) {
      append_simulate(config, doc);
      return doc;
    }
    if (config.omega && config.omega_se_mult) {
      throw Error(ErrorCode::usage, "give either omega or an omega standard-error multiplier");
    }
    EvalScheme::create(config.alpha, config.omega.value_or(1.0));
    if (config.omega_se_mult && !(*config.omega_se_mult > 0.0)) {
      throw Error(ErrorCode::invalid_argument, "omega multiplier must be positive");
    }
    ParsedInputs in = parse_inputs(config);
    doc.warnings = std::move(in.warnings);
    switch (config.command) {
      case Command::ztest:
        doc.sections.push_back(test_section(run_battery(config, in, TestKind::Z)));
        break;
      case Command::btest:
        doc.sections.push_back(test_section(run_battery(config, in, TestKind::B)));
        break;
      case Command::coverage:
        append_coverage(config, in, doc);
        break;
      case Command::mse:
        append_mse(config, in, doc);
        break;
      case Command::report:
        doc.sections.push_back(test_section(run_battery(config, in, std::nullopt)));
        append_coverage(config, in, doc);
        append_mse(config, in, doc);
        break;
      default:
        break;
    }
  } catch (const Error& e) {
    doc.status = "error";
    doc.sections.clear();
    doc.error = ReportError{std::string(to_string(e.code())), e.what()};
  } catch (const std::exception& e) {
    doc.status = "error";
    doc.sections.clear();
    doc.error = ReportError{"internal_error", e.what()};
  }
  return doc;
}

int report_exit_status(const ReportDocument& doc) noexcept {
  if (doc.status == "ok") return 0;
  if (doc.status == "verification_failed") return exit_status(ErrorCode::verification_failed);
  if (doc.error) {
    for (int i = 0; i <= static_cast<int>(ErrorCode::verification_failed); ++i) {
      const auto code = static_cast<ErrorCode>(i);
      if (doc.error->code == to_string(code)) return exit_status(code);
    }
  }
  return 2;
}

std::filesystem::path resolve_output_path(const std::filesystem::path& path) {
  if (path.empty() || path.is_absolute()) return path;
  if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') {
    return std::filesystem::path(dir) / path;
  }
  return path;
}

}  // namespace auditcov
