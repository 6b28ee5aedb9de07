#include "mspp/libsvm.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "mspp/csv.hpp"

namespace mspp {

namespace {

double parse_number(const std::string& token, long line) {
  double value = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  if (begin != end && *begin == '+') ++begin;  // from_chars rejects a leading '+'
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || begin == end)
    throw parse_error("libsvm: non-numeric token '" + token + "'", line);
  return value;
}

struct SparseRow {
  double label = 0.0;
  std::vector<std::pair<int, double>> entries;
};

SparseRow parse_line(const std::string& line_text, long line) {
  std::istringstream tokens(line_text);
  std::string token;
  if (!(tokens >> token)) throw parse_error("libsvm: empty line", line);

  SparseRow row;
  row.label = parse_number(token, line);
  int prev_index = 0;
  while (tokens >> token) {
    const auto colon = token.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == token.size())
      throw parse_error("libsvm: malformed feature '" + token + "'", line);
    const double raw_index = parse_number(token.substr(0, colon), line);
    const int index = static_cast<int>(raw_index);
    if (raw_index != index || index < 1)
      throw parse_error("libsvm: feature index must be a positive integer", line);
    if (index <= prev_index)
      throw parse_error("libsvm: feature indices must be strictly increasing", line);
    row.entries.emplace_back(index, parse_number(token.substr(colon + 1), line));
    prev_index = index;
  }
  return row;
}

void map_labels(std::vector<double>& labels) {
  const std::set<double> values(labels.begin(), labels.end());
  const auto subset_of = [&](std::initializer_list<double> allowed) {
    for (double v : values)
      if (std::set<double>(allowed).count(v) == 0) return false;
    return true;
  };
  if (subset_of({-1.0, 1.0})) return;
  if (subset_of({1.0, 2.0})) {
    for (double& y : labels) y = (y == 1.0) ? 1.0 : -1.0;
    return;
  }
  if (subset_of({0.0, 1.0})) {
    for (double& y : labels) y = (y == 0.0) ? -1.0 : 1.0;
    return;
  }
  throw parse_error("libsvm: unsupported label set (need {-1,+1}, {1,2} or {0,1})", 0);
}

}  // namespace

Dataset parse_libsvm(std::istream& in) {
  std::vector<SparseRow> rows;
  std::vector<double> labels;
  std::string line_text;
  long line = 0;
  int dim = 0;
  while (std::getline(in, line_text)) {
    ++line;
    if (line_text.empty() || line_text[0] == '#') continue;
    if (line_text.find_first_not_of(" \t\r") == std::string::npos) continue;
    SparseRow row = parse_line(line_text, line);
    if (!row.entries.empty()) dim = std::max(dim, row.entries.back().first);
    labels.push_back(row.label);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw parse_error("libsvm: no samples", 0);
  map_labels(labels);

  Dataset data;
  data.dim = dim;
  data.samples.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    Sample z;
    z.x = Vector::Zero(dim);
    for (const auto& [index, value] : rows[i].entries) z.x[index - 1] = value;
    z.y = labels[i];
    data.samples.push_back(std::move(z));
  }
  return data;
}

Dataset parse_libsvm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("libsvm: cannot open '" + path + "'", 0);
  return parse_libsvm(in);
}

void write_libsvm(std::ostream& out, std::span<const Sample> samples) {
  for (const Sample& z : samples) {
    out << format_double(z.y);
    for (Eigen::Index i = 0; i < z.x.size(); ++i) {
      if (z.x[i] != 0.0) out << ' ' << (i + 1) << ':' << format_double(z.x[i]);
    }
    out << '\n';
  }
}

}  // namespace mspp
