#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "platoon/geometry.hpp"
#include "platoon/simulator.hpp"

namespace platoon {

// Column names in file order: t; x_i, y_i, phi_i, v_i, omega_i for i = 0..N;
// then d_i ... status_i for followers i = 1..N.
std::vector<std::string> trace_columns(int n_followers);

// Writes rows whose index is a multiple of `decimation`. Numbers use the
// shortest representation that reads back bit-exactly. Throws PlatoonError on IO failure.
void write_trace_csv(std::ostream& out, const Trace& trace, int decimation = 1);
void write_trace_csv(const std::filesystem::path& path, const Trace& trace, int decimation = 1);

Trace read_trace_csv(std::istream& in);
Trace read_trace_csv(const std::filesystem::path& path);

// Keeps rows 0, d, 2d, ...
Trace decimate(const Trace& trace, int decimation);

struct ReportContext {
  std::uint64_t seed = 0;
  double steady_window_fraction = 0.25;
  int decimation = 1;
  // Metrics of the rows actually written to the trace file; only emitted when decimation > 1.
  const TraceMetrics* trace_file_metrics = nullptr;
};

std::string report_to_json(const RunReport& report, const ReportContext& ctx);
void write_report_json(const std::filesystem::path& path, const RunReport& report, const ReportContext& ctx);

// Reads back the "metrics" object (or "trace_file_metrics" when present and
// `prefer_trace_file` is set) from a report written by write_report_json.
TraceMetrics read_report_metrics(const std::filesystem::path& path, bool prefer_trace_file = false);

// Long-form CSVs for plotting: trajectories, distance errors with bounds,
// bearing errors with bounds, distances with constraint lines.
std::vector<std::filesystem::path> write_plot_data(const std::filesystem::path& dir, const Trace& trace,
                                                   const Constraints& constraints, int decimation = 1);

}  // namespace platoon
