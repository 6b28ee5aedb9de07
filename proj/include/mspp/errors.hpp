#pragma once

#include <stdexcept>
#include <string>

namespace mspp {

// Config or argument violations (exit code 1 at the CLI).
using config_error = std::invalid_argument;

// Malformed input data; line is 1-based, 0 when the whole file is at fault.
class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& what, long line)
      : std::runtime_error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}

  long line() const { return line_; }

 private:
  long line_;
};

// Divergence or a missed certification target; round is 1-based, 0 when the
// failure is not tied to an outer round.
class numerical_error : public std::runtime_error {
 public:
  numerical_error(const std::string& what, int round = 0)
      : std::runtime_error(round > 0 ? what + " (round " + std::to_string(round) + ")" : what),
        round_(round) {}

  int round() const { return round_; }

 private:
  int round_;
};

}  // namespace mspp
