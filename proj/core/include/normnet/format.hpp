#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

namespace normnet {

// Report files serialize numbers with 12 significant digits; display
// rounding is the consumer's job.
inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Round through the 12-digit representation (for JSON fields, so that the
// emitted value matches the TSV form).
inline double round12(double v) {
  return std::strtod(format_number(v).c_str(), nullptr);
}

}  // namespace normnet
