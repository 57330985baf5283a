#pragma once

#include <charconv>
#include <cstdio>
#include <string>

namespace cybergeo {

// Report number format: printf "%.10g".
inline std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// Shortest representation that parses back to the identical double; used
// for data files that are read back by the pipeline.
inline std::string format_exact(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace cybergeo
