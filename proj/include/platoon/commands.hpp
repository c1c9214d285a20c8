#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "platoon/scenario.hpp"

namespace platoon {

// Process exit codes.
enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitViolation = 2 };

struct RunOptions {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<int> decimation;
  std::optional<BreachPolicy> breach_policy;
  std::uint64_t seed = 0;
};

// Runs one scenario and writes trace CSV, report JSON and (optionally) plot data
// under out_dir. 0: clean run; 2: envelope/constraint violations or breach halt;
// 1: config or IO error.
int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err);

// Parses and validates a config without running it.
int cmd_check(const std::string& config_path, std::ostream& out, std::ostream& err);

struct VerifyOptions {
  std::optional<std::string> config_path;  // built-in reference scenario when empty
  bool dt_sweep = false;
  bool flip_bearing_sign = false;  // test hook: audit with the wrong bearing convention
};

// Runs the oracle suite and prints one line per check. 0 iff all pass.
int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err);

struct SweepOptions {
  std::string config_path;
  std::string axis;           // dotted config path, e.g. controller.k_d or simulation.dt
  std::vector<double> values; // in the unit the config uses for that key
  std::string out_dir = ".";
  std::uint64_t seed = 0;
};

// One run per value, run concurrently; writes sweep_report.json and prints a table.
int cmd_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err);

// Parses "a,b,c" into numbers; throws ConfigError on bad or empty input.
std::vector<double> parse_value_list(const std::string& text);

}  // namespace platoon
