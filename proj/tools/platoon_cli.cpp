// Command-line front end: run, check, verify and sweep platoon scenarios.

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "platoon/commands.hpp"
#include "platoon/errors.hpp"

int main(int argc, char** argv) {
  using namespace platoon;

  CLI::App app{"Decentralized prescribed-performance platoon simulator"};
  app.require_subcommand(1);

  const std::map<std::string, BreachPolicy> policies{{"halt", BreachPolicy::halt}, {"record", BreachPolicy::record}};

  RunOptions run_opts;
  int decimation = 0;
  BreachPolicy policy = BreachPolicy::halt;
  auto* run = app.add_subcommand("run", "Run a scenario and write trace, report and plot data");
  run->add_option("--config", run_opts.config_path, "Scenario config (JSON)")->required();
  run->add_option("--out-dir", run_opts.out_dir, "Output directory");
  auto* dec_opt = run->add_option("--decimation", decimation, "Write every N-th row")->check(CLI::PositiveNumber);
  auto* pol_opt = run->add_option("--breach-policy", policy, "halt or record")
                      ->transform(CLI::CheckedTransformer(policies, CLI::ignore_case));
  run->add_option("--seed", run_opts.seed, "Stamped into the report (the pipeline is noise-free)");

  std::string check_path;
  auto* check = app.add_subcommand("check", "Validate a config without running it");
  check->add_option("--config", check_path, "Scenario config (JSON)")->required();

  VerifyOptions verify_opts;
  std::string verify_path;
  auto* verify = app.add_subcommand("verify", "Run the oracle suite");
  auto* verify_cfg = verify->add_option("--config", verify_path, "Scenario config (default: built-in reference)");
  verify->add_flag("--dt-sweep", verify_opts.dt_sweep, "Print the audit convergence table");
  verify->add_flag("--flip-bearing-sign", verify_opts.flip_bearing_sign,
                   "Audit with a negated bearing (should fail)");

  SweepOptions sweep_opts;
  std::string values;
  auto* sweep = app.add_subcommand("sweep", "One run per value of a numeric config key");
  sweep->add_option("--config", sweep_opts.config_path, "Base scenario config (JSON)")->required();
  sweep->add_option("--axis", sweep_opts.axis, "Dotted config key, e.g. controller.k_d")->required();
  sweep->add_option("--values", values, "Comma-separated values")->required();
  sweep->add_option("--out-dir", sweep_opts.out_dir, "Output directory");
  sweep->add_option("--seed", sweep_opts.seed, "Stamped into the reports");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  if (*run) {
    if (*dec_opt) run_opts.decimation = decimation;
    if (*pol_opt) run_opts.breach_policy = policy;
    return cmd_run(run_opts, std::cout, std::cerr);
  }
  if (*check) return cmd_check(check_path, std::cout, std::cerr);
  if (*verify) {
    if (*verify_cfg) verify_opts.config_path = verify_path;
    return cmd_verify(verify_opts, std::cout, std::cerr);
  }
  if (*sweep) {
    try {
      sweep_opts.values = parse_value_list(values);
    } catch (const ConfigError& e) {
      std::cerr << e.what() << "\n";
      return kExitConfig;
    }
    return cmd_sweep(sweep_opts, std::cout, std::cerr);
  }
  return kExitConfig;
}
