#include <iostream>
#include <map>
#include <string>

#if __has_include(<CLI/CLI.hpp>)
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif

#include "auditcov/commands.hpp"
#include "auditcov/error.hpp"
#include "auditcov/report.hpp"

namespace {

using auditcov::Command;
using auditcov::RunConfig;

void add_market_inputs(CLI::App& sub, RunConfig& cfg) {
  sub.add_option("--prices", cfg.prices, "prices.csv (period,group,index)")->required();
  sub.add_option("--proxy-weights", cfg.proxy_weights, "weights.csv (source,group,weight)")
      ->required();
  auto* micro = sub.add_option("--survey-micro", cfg.survey_micro,
                               "ces_micro.csv (household_id,group,expenditure[,stratum])");
  auto* est = sub.add_option("--weight-estimate", cfg.weight_estimate,
                             "weight_estimate.csv (source,entry,row_group,col_group,value)");
  micro->excludes(est);
  sub.add_option("--survey-group,-g", cfg.survey_groups, "survey group g (repeatable)");
  sub.add_option("--proxy-group,-G", cfg.proxy_groups, "proxy source g' (repeatable)");
  sub.add_option("--from", cfg.period_from, "first period label");
  sub.add_option("--to", cfg.period_to, "last period label");
}

void add_scheme(CLI::App& sub, RunConfig& cfg) {
  sub.add_option("--alpha", cfg.alpha, "evaluation level in (0,1)")->capture_default_str();
  auto* omega = sub.add_option("--omega", cfg.omega, "half-width in index units");
  auto* mult = sub.add_option("--omega-se-mult", cfg.omega_se_mult,
                              "half-width as a multiple of the median audit standard error "
                              "(default 2)");
  omega->excludes(mult);
}

void add_output(CLI::App& sub, RunConfig& cfg) {
  const std::map<std::string, auditcov::OutputFormat> formats{
      {"machine", auditcov::OutputFormat::machine}, {"table", auditcov::OutputFormat::table}};
  sub.add_option("--output,-o", cfg.output,
                 "report path (relative paths resolve against $AUDITCOV_OUTPUT_DIR)");
  sub.add_option("--format", cfg.format, "report format (default table)")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case).description(""))
      ->option_text("machine|table");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Audit-sample evaluation of proxy-weighted price indices"};
  app.set_version_flag("--version", std::string(auditcov::tool_version()));
  app.require_subcommand(1);

  RunConfig cfg;

  auto* z = app.add_subcommand("ztest", "Z-tests of the source effect");
  add_market_inputs(*z, cfg);
  z->add_flag("--per-period", cfg.per_period, "also test every single period");
  add_output(*z, cfg);

  auto* b = app.add_subcommand("btest", "unity-slope B-tests");
  add_market_inputs(*b, cfg);
  add_output(*b, cfg);

  auto* cov = app.add_subcommand("coverage", "per-period evaluation coverage");
  add_market_inputs(*cov, cfg);
  add_scheme(*cov, cfg);
  add_output(*cov, cfg);

  auto* mse = app.add_subcommand("mse", "per-period unbiased MSE estimates");
  add_market_inputs(*mse, cfg);
  add_output(*mse, cfg);

  auto* rep = app.add_subcommand("report", "test battery, coverage and MSE in one document");
  add_market_inputs(*rep, cfg);
  add_scheme(*rep, cfg);
  rep->add_flag("--per-period", cfg.per_period, "also Z-test every single period");
  add_output(*rep, cfg);

  auto* sim = app.add_subcommand("simulate", "generate synthetic household micro-data");
  sim->add_option("--prices", cfg.prices, "prices.csv, for the group labels")->required();
  sim->add_option("--proxy-weights", cfg.proxy_weights, "weights.csv holding the true shares")
      ->required();
  sim->add_option("--truth-source", cfg.truth_source, "source used as the true shares");
  sim->add_option("--households", cfg.households)->capture_default_str();
  sim->add_option("--dispersion", cfg.dispersion)->capture_default_str();
  sim->add_option("--micro-out", cfg.micro_out, "ces_micro.csv to write")->required();
  sim->add_option("--seed", cfg.seed)->capture_default_str();
  add_output(*sim, cfg);

  auto* ver = app.add_subcommand("verify", "Monte Carlo oracle suite");
  ver->add_option("--seed", cfg.seed)->capture_default_str();
  ver->add_option("--threads", cfg.threads, "worker threads, 0 = all cores")
      ->capture_default_str();
  ver->add_option("--replicate-scale", cfg.replicate_scale, "multiplies every replicate count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_output(*ver, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "auditcov: " << e.what() << "\n";
    return auditcov::exit_status(auditcov::ErrorCode::usage);
  }

  cfg.command = auditcov::command_from_string(app.get_subcommands().front()->get_name());
  const auditcov::ReportDocument doc = auditcov::run_command(cfg);

  try {
    if (cfg.output.empty()) {
      std::cout << auditcov::emit_report(doc, cfg.format);
    } else {
      auditcov::write_report(doc, cfg.format, auditcov::resolve_output_path(cfg.output));
    }
  } catch (const auditcov::Error& e) {
    std::cerr << "auditcov: " << e.what() << "\n";
    return auditcov::exit_status(e.code());
  }
  if (doc.error) std::cerr << "auditcov: " << doc.error->code << ": " << doc.error->message << "\n";
  return auditcov::report_exit_status(doc);
}
