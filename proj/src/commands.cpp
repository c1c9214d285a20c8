#include "platoon/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "platoon/config.hpp"
#include "platoon/error_dynamics.hpp"
#include "platoon/errors.hpp"
#include "platoon/simulator.hpp"
#include "platoon/trace_io.hpp"
#include "platoon/verification.hpp"

namespace platoon {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kAuditTolerance = 5e-3;

bool clean(const RunReport& r) {
  return !r.halted && r.metrics.envelope_violations == 0 && r.metrics.constraint_flags == 0;
}

void print_summary(std::ostream& out, const RunReport& r) {
  out << "rows: " << r.metrics.rows << "  final t: " << r.metrics.final_time << " s"
      << "  runtime: " << std::setprecision(3) << r.runtime_s << " s\n";
  out << "envelope violations: " << r.metrics.envelope_violations
      << "  constraint flags: " << r.metrics.constraint_flags << "  breach events: " << r.breach_events << "\n";
  out << std::setprecision(6) << "max |v|: " << r.metrics.max_abs_v << " m/s  max |omega|: " << r.metrics.max_abs_omega
      << " rad/s\n";
  if (r.halted) out << "halted: " << r.halt_reason << "\n";
}

// Time from which every follower keeps |e| within the channel's rho_inf; NaN if
// the last row is still outside.
double settling_time(const Trace& trace, const Scenario& s, Channel channel) {
  double last_outside = -1.0;
  for (const auto& row : trace.rows)
    for (int i = 0; i < trace.n_followers; ++i) {
      const auto& f = row.followers[i];
      const double e = channel == Channel::distance ? f.e_d : f.e_beta;
      const double band =
          channel == Channel::distance ? s.params[i].env.distance.rho_inf : s.params[i].env.bearing.rho_inf;
      if (std::fabs(e) > band) last_outside = row.t;
    }
  if (last_outside < 0.0) return 0.0;
  if (trace.rows.empty() || last_outside >= trace.rows.back().t) return std::nan("");
  return last_outside + s.dt;
}

void print_check(std::ostream& out, const CheckResult& c) {
  out << (c.pass ? "PASS  " : "FAIL  ") << c.name << ": residual " << std::scientific << std::setprecision(3)
      << c.residual << " (tol " << c.tolerance << ")" << std::defaultfloat;
  if (!c.detail.empty()) out << "  [" << c.detail << "]";
  out << "\n";
}

json* resolve(json& root, const std::string& dotted) {
  json* node = &root;
  std::stringstream ss(dotted);
  std::string part;
  while (std::getline(ss, part, '.')) {
    if (!node->is_object() || !node->contains(part)) return nullptr;
    node = &(*node)[part];
  }
  return node;
}

}  // namespace

std::vector<double> parse_value_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw ConfigError("empty entry in value list '" + text + "'");
    const std::string token = item.substr(b, e - b + 1);
    double v = 0.0;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
    if (res.ec != std::errc() || res.ptr != token.data() + token.size())
      throw ConfigError("value list entry '" + token + "' is not a number");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("value list is empty");
  return out;
}

int cmd_check(const std::string& config_path, std::ostream& out, std::ostream& err) {
  try {
    const Config cfg = load_config(config_path);
    const Scenario s = scenario_from_config(cfg);
    out << "config OK: " << s.n_followers << " followers, " << s.steps() << " steps of " << s.dt << " s\n";
    return kExitOk;
  } catch (const PlatoonError& e) {
    err << e.what() << "\n";
    return kExitConfig;
  }
}

int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  Config cfg;
  Scenario scenario;
  try {
    cfg = load_config(opts.config_path);
    if (opts.decimation) {
      if (*opts.decimation < 1) throw ConfigError("--decimation must be at least 1");
      cfg.output.decimation = *opts.decimation;
    }
    if (opts.breach_policy) cfg.breach_policy = *opts.breach_policy;
    scenario = scenario_from_config(cfg);
  } catch (const PlatoonError& e) {
    err << e.what() << "\n";
    return kExitConfig;
  }

  const RunResult result = run(scenario);
  print_summary(out, result.report);

  try {
    const fs::path dir(opts.out_dir);
    const int dec = cfg.output.decimation;
    write_trace_csv(dir / cfg.output.trace, result.trace, dec);
    TraceMetrics file_metrics;
    ReportContext ctx{opts.seed, scenario.steady_window_fraction, dec, nullptr};
    if (dec > 1) {
      file_metrics = summarize(decimate(result.trace, dec), scenario.steady_window_fraction);
      ctx.trace_file_metrics = &file_metrics;
    }
    write_report_json(dir / cfg.output.report, result.report, ctx);
    if (cfg.output.plot_data) write_plot_data(dir, result.trace, scenario.constraints, dec);
  } catch (const PlatoonError& e) {
    err << e.what() << "\n";
    return kExitConfig;
  }

  if (result.report.halted) err << "run halted: " << result.report.halt_reason << "\n";
  return clean(result.report) ? kExitOk : kExitViolation;
}

int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err) {
  Scenario scenario;
  try {
    const Config cfg = opts.config_path ? load_config(*opts.config_path) : reference_config(true);
    scenario = scenario_from_config(cfg);
  } catch (const PlatoonError& e) {
    err << e.what() << "\n";
    return kExitConfig;
  }

  std::vector<CheckResult> checks;
  const EnvelopePair& env = scenario.params.front().env;
  checks.push_back(check_derivative_identity(env.distance, "distance envelope"));
  checks.push_back(check_derivative_identity(env.bearing, "bearing envelope"));
  checks.push_back(check_round_trip(env.distance, "distance envelope"));
  checks.push_back(check_round_trip(env.bearing, "bearing envelope"));
  for (int n : {1, 2, 3, 8}) checks.push_back(check_vector_form(n, scenario.constraints));

  AuditOptions audit_opts;
  if (opts.flip_bearing_sign) audit_opts.convention = BearingConvention::flipped;
  {
    const RunResult res = run(scenario);
    if (res.trace.rows.size() >= 3) {
      const AuditReport audit = finite_difference_audit(res.trace, scenario, audit_opts);
      checks.push_back(check_audit(audit, kAuditTolerance, opts.flip_bearing_sign ? "flipped bearing sign" : "run"));
    } else {
      checks.push_back({"finite-difference audit", 0.0, kAuditTolerance, false, "trace shorter than three rows"});
    }
  }

  for (const auto& c : checks) print_check(out, c);

  bool all = std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
  if (opts.dt_sweep) {
    Scenario base = scenario;
    base.duration = std::min(base.duration, 20.0);
    const std::vector<double> dts{4e-3, 2e-3, 1e-3, 5e-4};
    const auto rows = audit_dt_sweep(base, dts, audit_opts);
    out << "\nconvergence of the finite-difference audit (" << base.duration << " s runs)\n";
    out << std::setw(10) << "dt [s]" << std::setw(14) << "resid d" << std::setw(10) << "order" << std::setw(14)
        << "resid beta" << std::setw(10) << "order" << "\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      out << std::setw(10) << rows[i].dt << std::scientific << std::setprecision(3) << std::setw(14)
          << rows[i].residual_d;
      if (i > 0) {
        out << std::fixed << std::setprecision(2) << std::setw(10)
            << std::log2(rows[i - 1].residual_d / rows[i].residual_d) << std::scientific << std::setprecision(3)
            << std::setw(14) << rows[i].residual_beta << std::fixed << std::setprecision(2) << std::setw(10)
            << std::log2(rows[i - 1].residual_beta / rows[i].residual_beta);
      } else {
        out << std::setw(10) << "-" << std::setw(14) << rows[i].residual_beta << std::setw(10) << "-";
      }
      out << std::defaultfloat << (rows[i].halted ? "  (halted)" : "") << "\n";
      if (i > 0 && !(rows[i].residual_d < rows[i - 1].residual_d && rows[i].residual_beta < rows[i - 1].residual_beta))
        all = false;
    }
  }

  out << (all ? "all checks passed\n" : "verification FAILED\n");
  return all ? kExitOk : kExitViolation;
}

int cmd_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err) {
  std::vector<Scenario> scenarios;
  try {
    if (opts.values.empty()) throw ConfigError("sweep needs at least one value");
    std::ifstream in(opts.config_path);
    if (!in) throw ConfigError("cannot open config file '" + opts.config_path + "'");
    json base;
    try {
      base = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    json* node = resolve(base, opts.axis);
    if (!node) throw ConfigError("sweep axis '" + opts.axis + "' does not exist in the config");
    std::string unit;
    if (node->is_string()) {
      const std::string text = node->get<std::string>();
      double probe = 0.0;
      const auto res = std::from_chars(text.data(), text.data() + text.size(), probe);
      if (res.ec != std::errc()) throw ConfigError("sweep axis '" + opts.axis + "' is not numeric");
      unit = std::string(res.ptr, text.data() + text.size());
    } else if (!node->is_number()) {
      throw ConfigError("sweep axis '" + opts.axis + "' is not numeric");
    }
    for (double v : opts.values) {
      json variant = base;
      json* target = resolve(variant, opts.axis);
      if (node->is_string()) {
        char buf[32];
        const auto res = std::to_chars(buf, buf + sizeof buf, v);
        *target = std::string(buf, res.ptr) + unit;
      } else if (node->is_number_integer()) {
        if (v != std::floor(v)) throw ConfigError("sweep axis '" + opts.axis + "' takes integers");
        *target = static_cast<long>(v);
      } else {
        *target = v;
      }
      scenarios.push_back(scenario_from_config(parse_config(variant.dump())));
    }
  } catch (const PlatoonError& e) {
    err << e.what() << "\n";
    return kExitConfig;
  }

  const std::vector<RunResult> results = run_batch(scenarios);

  json entries = json::array();
  bool all_clean = true;
  out << std::setw(12) << opts.axis << std::setw(12) << "violations" << std::setw(12) << "max|v|" << std::setw(12)
      << "max|omega|" << std::setw(12) << "settle_d" << std::setw(12) << "settle_b" << std::setw(12) << "audit_d"
      << std::setw(12) << "audit_b" << "\n";
  try {
    const fs::path dir(opts.out_dir);
    fs::create_directories(dir);
    for (std::size_t i = 0; i < results.size(); ++i) {
      const auto& r = results[i];
      const auto& s = scenarios[i];
      all_clean = all_clean && clean(r.report);
      double audit_d = std::nan(""), audit_b = std::nan("");
      if (r.trace.rows.size() >= 3) {
        const AuditReport a = finite_difference_audit(r.trace, s);
        audit_d = a.distance.max_abs;
        audit_b = a.bearing.max_abs;
      }
      const double settle_d = settling_time(r.trace, s, Channel::distance);
      const double settle_b = settling_time(r.trace, s, Channel::bearing);
      double steady_d = 0.0, steady_b = 0.0;
      for (const auto& v : r.report.metrics.vehicles) {
        steady_d = std::max(steady_d, v.steady_max_abs_e_d);
        steady_b = std::max(steady_b, v.steady_max_abs_e_beta);
      }
      auto num = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
      entries.push_back({{"value", opts.values[i]},
                         {"halted", r.report.halted},
                         {"envelope_violations", r.report.metrics.envelope_violations},
                         {"constraint_flags", r.report.metrics.constraint_flags},
                         {"max_abs_v", r.report.metrics.max_abs_v},
                         {"max_abs_omega", r.report.metrics.max_abs_omega},
                         {"steady_max_abs_e_d", steady_d},
                         {"steady_max_abs_e_beta", steady_b},
                         {"settling_time_d", num(settle_d)},
                         {"settling_time_beta", num(settle_b)},
                         {"audit_residual_d", num(audit_d)},
                         {"audit_residual_beta", num(audit_b)}});
      write_report_json(dir / ("sweep_run_" + std::to_string(i) + "_report.json"), r.report,
                        ReportContext{opts.seed, s.steady_window_fraction, 1, nullptr});
      out << std::setw(12) << opts.values[i] << std::setw(12) << r.report.metrics.envelope_violations
          << std::setprecision(4) << std::setw(12) << r.report.metrics.max_abs_v << std::setw(12)
          << r.report.metrics.max_abs_omega << std::setw(12) << settle_d << std::setw(12) << settle_b << std::setw(12)
          << audit_d << std::setw(12) << audit_b << (r.report.halted ? "  halted" : "") << "\n";
    }
    const json summary = {{"axis", opts.axis}, {"seed", opts.seed}, {"runs", entries}};
    std::ofstream f(dir / "sweep_report.json");
    f << summary.dump(2) << "\n";
    if (!f) throw PlatoonError("failed writing sweep_report.json");
  } catch (const PlatoonError& e) {
    err << e.what() << "\n";
    return kExitConfig;
  } catch (const fs::filesystem_error& e) {
    err << e.what() << "\n";
    return kExitConfig;
  }
  return all_clean ? kExitOk : kExitViolation;
}

}  // namespace platoon
