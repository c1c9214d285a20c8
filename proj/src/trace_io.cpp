#include "platoon/trace_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "platoon/errors.hpp"

namespace platoon {

using nlohmann::json;

namespace {

constexpr int kPoseCols = 5;
constexpr int kFollowerCols = 13;

void put(std::string& line, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  line.push_back(',');
  line.append(buf, res.ptr);
}

double get_number(std::string_view s, long line_no) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw PlatoonError("trace line " + std::to_string(line_no) + ": bad number '" + std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PlatoonError("cannot write '" + path.string() + "'");
  return out;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_or(const json& j, double fallback) { return j.is_null() ? fallback : j.get<double>(); }

json channel_json(const ChannelStats& c) {
  return {{"violations", c.violations},
          {"first_violation", c.first_violation ? json(*c.first_violation) : json(nullptr)}};
}

ChannelStats channel_from(const json& j) {
  ChannelStats c;
  c.violations = j.at("violations").get<long>();
  if (!j.at("first_violation").is_null()) c.first_violation = j.at("first_violation").get<double>();
  return c;
}

json metrics_json(const TraceMetrics& m) {
  json vehicles = json::array();
  for (const auto& v : m.vehicles) {
    vehicles.push_back({{"vehicle", v.vehicle},
                        {"distance", channel_json(v.distance)},
                        {"bearing", channel_json(v.bearing)},
                        {"collision_flags", v.collision_flags},
                        {"connectivity_flags", v.connectivity_flags},
                        {"min_d", finite_or_null(v.min_d)},
                        {"max_d", finite_or_null(v.max_d)},
                        {"max_abs_beta", v.max_abs_beta},
                        {"max_abs_v", v.max_abs_v},
                        {"max_abs_omega", v.max_abs_omega},
                        {"steady_max_abs_e_d", v.steady_max_abs_e_d},
                        {"steady_max_abs_e_beta", v.steady_max_abs_e_beta}});
  }
  return {{"rows", m.rows},
          {"final_time", m.final_time},
          {"steady_window_start", m.steady_window_start},
          {"envelope_violations", m.envelope_violations},
          {"constraint_flags", m.constraint_flags},
          {"max_abs_v", m.max_abs_v},
          {"max_abs_omega", m.max_abs_omega},
          {"vehicles", vehicles}};
}

TraceMetrics metrics_from(const json& j) {
  TraceMetrics m;
  m.rows = j.at("rows").get<long>();
  m.final_time = j.at("final_time").get<double>();
  m.steady_window_start = j.at("steady_window_start").get<double>();
  m.envelope_violations = j.at("envelope_violations").get<long>();
  m.constraint_flags = j.at("constraint_flags").get<long>();
  m.max_abs_v = j.at("max_abs_v").get<double>();
  m.max_abs_omega = j.at("max_abs_omega").get<double>();
  for (const auto& v : j.at("vehicles")) {
    VehicleSummary s;
    s.vehicle = v.at("vehicle").get<int>();
    s.distance = channel_from(v.at("distance"));
    s.bearing = channel_from(v.at("bearing"));
    s.collision_flags = v.at("collision_flags").get<long>();
    s.connectivity_flags = v.at("connectivity_flags").get<long>();
    s.min_d = number_or(v.at("min_d"), std::numeric_limits<double>::infinity());
    s.max_d = number_or(v.at("max_d"), -std::numeric_limits<double>::infinity());
    s.max_abs_beta = v.at("max_abs_beta").get<double>();
    s.max_abs_v = v.at("max_abs_v").get<double>();
    s.max_abs_omega = v.at("max_abs_omega").get<double>();
    s.steady_max_abs_e_d = v.at("steady_max_abs_e_d").get<double>();
    s.steady_max_abs_e_beta = v.at("steady_max_abs_e_beta").get<double>();
    m.vehicles.push_back(s);
  }
  return m;
}

}  // namespace

std::vector<std::string> trace_columns(int n) {
  std::vector<std::string> cols{"t"};
  for (int i = 0; i <= n; ++i)
    for (const char* name : {"x", "y", "phi", "v", "omega"}) cols.push_back(std::string(name) + "_" + std::to_string(i));
  for (int i = 1; i <= n; ++i)
    for (const char* name : {"d", "beta", "e_d", "e_beta", "xi_d", "xi_beta", "rho_d", "rho_beta", "lb_d", "ub_d",
                             "lb_beta", "ub_beta", "status"})
      cols.push_back(std::string(name) + "_" + std::to_string(i));
  return cols;
}

void write_trace_csv(std::ostream& out, const Trace& trace, int decimation) {
  if (decimation < 1) throw ConfigError("decimation must be at least 1");
  const auto cols = trace_columns(trace.n_followers);
  std::string line;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (c) line.push_back(',');
    line += cols[c];
  }
  out << line << '\n';

  for (std::size_t k = 0; k < trace.rows.size(); k += static_cast<std::size_t>(decimation)) {
    const TraceRow& row = trace.rows[k];
    line.clear();
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, row.t);
    line.append(buf, res.ptr);
    for (std::size_t i = 0; i < row.poses.size(); ++i) {
      put(line, row.poses[i].x);
      put(line, row.poses[i].y);
      put(line, row.poses[i].phi);
      put(line, row.inputs[i].v);
      put(line, row.inputs[i].omega);
    }
    for (const auto& s : row.followers) {
      for (double v : {s.m.d, s.m.beta, s.e_d, s.e_beta, s.xi_d, s.xi_beta, s.rho_d, s.rho_beta, s.lb_d, s.ub_d,
                       s.lb_beta, s.ub_beta})
        put(line, v);
      line.push_back(',');
      line += to_string(s.status);
    }
    out << line << '\n';
  }
  if (!out) throw PlatoonError("failed writing trace");
}

void write_trace_csv(const std::filesystem::path& path, const Trace& trace, int decimation) {
  auto out = open_out(path);
  write_trace_csv(out, trace, decimation);
  out.flush();
  if (!out) throw PlatoonError("failed writing '" + path.string() + "'");
}

Trace read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw PlatoonError("trace: missing header");
  const auto header = split(line);
  const long width = static_cast<long>(header.size());
  const long extra = width - 1 - kPoseCols;
  if (extra < 0 || extra % (kPoseCols + kFollowerCols) != 0) throw PlatoonError("trace: unexpected column count");
  const int n = static_cast<int>(extra / (kPoseCols + kFollowerCols));
  const auto expected = trace_columns(n);
  for (long c = 0; c < width; ++c)
    if (header[c] != expected[c]) throw PlatoonError("trace: unexpected column '" + std::string(header[c]) + "'");

  Trace trace;
  trace.n_followers = n;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line);
    if (static_cast<long>(f.size()) != width) throw PlatoonError("trace line " + std::to_string(line_no) + ": wrong width");
    TraceRow row;
    std::size_t c = 0;
    row.t = get_number(f[c++], line_no);
    row.poses.resize(n + 1);
    row.inputs.resize(n + 1);
    for (int i = 0; i <= n; ++i) {
      row.poses[i].x = get_number(f[c++], line_no);
      row.poses[i].y = get_number(f[c++], line_no);
      row.poses[i].phi = get_number(f[c++], line_no);
      row.inputs[i].v = get_number(f[c++], line_no);
      row.inputs[i].omega = get_number(f[c++], line_no);
    }
    row.followers.resize(n);
    for (auto& s : row.followers) {
      for (double* v : {&s.m.d, &s.m.beta, &s.e_d, &s.e_beta, &s.xi_d, &s.xi_beta, &s.rho_d, &s.rho_beta, &s.lb_d,
                        &s.ub_d, &s.lb_beta, &s.ub_beta})
        *v = get_number(f[c++], line_no);
      s.status = parse_constraint_status(std::string(f[c++]).c_str());
    }
    trace.rows.push_back(std::move(row));
  }
  return trace;
}

Trace read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PlatoonError("cannot open trace '" + path.string() + "'");
  return read_trace_csv(in);
}

Trace decimate(const Trace& trace, int decimation) {
  if (decimation < 1) throw ConfigError("decimation must be at least 1");
  Trace out;
  out.n_followers = trace.n_followers;
  for (std::size_t k = 0; k < trace.rows.size(); k += static_cast<std::size_t>(decimation))
    out.rows.push_back(trace.rows[k]);
  return out;
}

std::string report_to_json(const RunReport& report, const ReportContext& ctx) {
  json events = json::array();
  for (const auto& e : report.events)
    events.push_back({{"t", e.t}, {"vehicle", e.vehicle}, {"kind", to_string(e.kind)}, {"message", e.message}});
  json root = {{"schema_version", 1},
               {"seed", ctx.seed},
               {"steady_window_fraction", ctx.steady_window_fraction},
               {"decimation", ctx.decimation},
               {"halted", report.halted},
               {"halt_reason", report.halt_reason},
               {"runtime_s", report.runtime_s},
               {"counters",
                {{"breach_events", report.breach_events},
                 {"soft_guard_warnings", report.soft_guard_warnings},
                 {"saturation_warnings", report.saturation_warnings}}},
               {"events", events},
               {"metrics", metrics_json(report.metrics)}};
  if (ctx.trace_file_metrics) root["trace_file_metrics"] = metrics_json(*ctx.trace_file_metrics);
  return root.dump(2) + "\n";
}

void write_report_json(const std::filesystem::path& path, const RunReport& report, const ReportContext& ctx) {
  auto out = open_out(path);
  out << report_to_json(report, ctx);
  out.flush();
  if (!out) throw PlatoonError("failed writing '" + path.string() + "'");
}

TraceMetrics read_report_metrics(const std::filesystem::path& path, bool prefer_trace_file) {
  std::ifstream in(path);
  if (!in) throw PlatoonError("cannot open report '" + path.string() + "'");
  const json root = json::parse(in);
  if (prefer_trace_file && root.contains("trace_file_metrics")) return metrics_from(root.at("trace_file_metrics"));
  return metrics_from(root.at("metrics"));
}

std::vector<std::filesystem::path> write_plot_data(const std::filesystem::path& dir, const Trace& trace,
                                                   const Constraints& constraints, int decimation) {
  if (decimation < 1) throw ConfigError("decimation must be at least 1");
  const std::vector<std::filesystem::path> paths{dir / "plot_trajectories.csv", dir / "plot_distance_errors.csv",
                                                 dir / "plot_bearing_errors.csv", dir / "plot_distances.csv"};
  auto traj = open_out(paths[0]);
  auto dist_err = open_out(paths[1]);
  auto bear_err = open_out(paths[2]);
  auto dist = open_out(paths[3]);
  traj << "t,vehicle,x,y\n";
  dist_err << "t,vehicle,e_d,lower,upper\n";
  bear_err << "t,vehicle,e_beta,lower,upper\n";
  dist << "t,vehicle,d,d_col,d_con\n";

  std::string line;
  auto emit = [&line](std::ostream& os, double t, int vehicle, std::initializer_list<double> values) {
    line.clear();
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, t);
    line.append(buf, res.ptr);
    line += "," + std::to_string(vehicle);
    for (double v : values) put(line, v);
    os << line << '\n';
  };

  for (std::size_t k = 0; k < trace.rows.size(); k += static_cast<std::size_t>(decimation)) {
    const auto& row = trace.rows[k];
    for (std::size_t i = 0; i < row.poses.size(); ++i)
      emit(traj, row.t, static_cast<int>(i), {row.poses[i].x, row.poses[i].y});
    for (std::size_t i = 0; i < row.followers.size(); ++i) {
      const auto& s = row.followers[i];
      const int vehicle = static_cast<int>(i) + 1;
      emit(dist_err, row.t, vehicle, {s.e_d, s.lb_d, s.ub_d});
      emit(bear_err, row.t, vehicle, {s.e_beta, s.lb_beta, s.ub_beta});
      emit(dist, row.t, vehicle, {s.m.d, constraints.d_col, constraints.d_con});
    }
  }
  for (auto* os : {&traj, &dist_err, &bear_err, &dist}) {
    os->flush();
    if (!*os) throw PlatoonError("failed writing plot data under '" + dir.string() + "'");
  }
  return paths;
}

}  // namespace platoon
