#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace mspp {

// One evaluation point of one run; rows are ordered by t within a run.
struct TraceRow {
  std::string run_id;
  std::string algorithm;
  int t = 0;
  long samples_seen = 0;
  std::string metric_name;
  double metric_value = 0.0;
  double wallclock_ms = 0.0;
};

// Shortest round-trip decimal representation.
std::string format_double(double value);

// Header `run_id,algorithm,t,samples_seen,metric_name,metric_value,wallclock_ms`,
// LF line endings.
void emit_csv(std::span<const TraceRow> rows, std::ostream& out);
void emit_csv(std::span<const TraceRow> rows, const std::string& path);

std::vector<TraceRow> parse_trace_csv(std::istream& in);

}  // namespace mspp
