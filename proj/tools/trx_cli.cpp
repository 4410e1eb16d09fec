#include "trx/errors.hpp"
#include "trx/scenario.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> tol_rank;
  std::optional<int> max_trials;
  std::string out;
  std::string csv_dir;
  std::string config;
};

void add_common(CLI::App* cmd, Overrides& o, bool config_required) {
  auto* c = cmd->add_option("--config", o.config, "scenario JSON file");
  if (config_required) c->required();
  cmd->add_option("--seed", o.seed, "overrides the configured seed");
  cmd->add_option("--out", o.out, "report path (default: stdout)");
  cmd->add_option("--tol-rank", o.tol_rank, "rank tolerance for the tangent-span test")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-trials", o.max_trials, "cap on perturbation trials")->check(CLI::NonNegativeNumber);
}

trx::ScenarioConfig load(const Overrides& o) {
  trx::ScenarioConfig cfg;
  if (!o.config.empty()) {
    cfg = trx::load_config(o.config);
  } else {
    cfg.name = "default";
  }
  if (o.seed) cfg.seed = *o.seed;
  if (o.tol_rank) cfg.tolerances.tol_rank = *o.tol_rank;
  if (o.max_trials) cfg.max_trials = *o.max_trials;
  return cfg;
}

void emit(const nlohmann::json& report, const std::string& path) {
  if (path.empty()) {
    std::cout << report.dump(2) << '\n';
    return;
  }
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path);
  if (!out) throw trx::SchemaError("cannot write report to '" + path + "'");
  out << report.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transverse retraction of singular simplices"};
  app.require_subcommand(1);

  Overrides run_opts;
  auto* run = app.add_subcommand("run", "execute the steps of a scenario config");
  add_common(run, run_opts, true);
  run->add_option("--csv-dir", run_opts.csv_dir, "directory for CSV sign tables and track slices");

  Overrides verify_opts;
  auto* verify = app.add_subcommand("verify", "run the invariant battery");
  add_common(verify, verify_opts, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    trx::ScenarioOutcome outcome;
    std::string out_path;
    if (run->parsed()) {
      const auto cfg = load(run_opts);
      outcome = trx::run_scenario(cfg, run_opts.csv_dir.empty() ? std::nullopt
                                                                : std::optional<std::string>(run_opts.csv_dir));
      out_path = run_opts.out;
    } else {
      const auto cfg = load(verify_opts);
      outcome = trx::verify_suite(cfg);
      out_path = verify_opts.out;
    }
    emit(outcome.report, out_path);
    std::cerr << (outcome.passed ? "PASS" : "FAIL") << '\n';
    return outcome.passed ? 0 : 1;
  } catch (const trx::SchemaError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const trx::Error& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
}
