#include "mspp/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "mspp/errors.hpp"

namespace mspp {

namespace {
constexpr const char* kHeader = "run_id,algorithm,t,samples_seen,metric_name,metric_value,wallclock_ms";
}

std::string format_double(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

void emit_csv(std::span<const TraceRow> rows, std::ostream& out) {
  out << kHeader << '\n';
  for (const TraceRow& row : rows) {
    out << row.run_id << ',' << row.algorithm << ',' << row.t << ',' << row.samples_seen << ','
        << row.metric_name << ',' << format_double(row.metric_value) << ','
        << format_double(row.wallclock_ms) << '\n';
  }
}

void emit_csv(std::span<const TraceRow> rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
  if (!out) throw parse_error("csv: cannot open '" + path + "' for writing", 0);
  emit_csv(rows, out);
  if (!out) throw parse_error("csv: write failure on '" + path + "'", 0);
}

std::vector<TraceRow> parse_trace_csv(std::istream& in) {
  std::vector<TraceRow> rows;
  std::string line;
  if (!std::getline(in, line) || line != kHeader)
    throw parse_error("csv: missing or unexpected header", 1);
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string field;
    TraceRow row;
    const auto next = [&]() {
      if (!std::getline(fields, field, ',')) throw parse_error("csv: missing field", line_no);
      return field;
    };
    row.run_id = next();
    row.algorithm = next();
    row.t = std::stoi(next());
    row.samples_seen = std::stol(next());
    row.metric_name = next();
    row.metric_value = std::stod(next());
    row.wallclock_ms = std::stod(next());
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace mspp
