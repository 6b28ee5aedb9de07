#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mspp/types.hpp"

namespace mspp {

struct Dataset {
  std::vector<Sample> samples;
  int dim = 0;
};

// LIBSVM text format: `label idx:val idx:val ...` with 1-based strictly
// increasing indices. Missing indices are zero; dim is the max index seen.
// Labels are mapped to {-1, +1}: {+-1} pass through, {1, 2} -> {+1, -1}
// (covtype convention), {0, 1} -> {-1, +1}.
Dataset parse_libsvm(const std::string& path);
Dataset parse_libsvm(std::istream& in);

// Dense samples in the same format, zero entries omitted.
void write_libsvm(std::ostream& out, std::span<const Sample> samples);

}  // namespace mspp
