#pragma once

#include <cstdio>
#include <ostream>
#include <string>

namespace robincap {

/// Locale-independent float formatting, 17 significant digits ('.' decimal):
/// round-trip exact for doubles and byte-stable across runs.
inline std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string csv_number(int v) { return std::to_string(v); }
inline std::string csv_number(long long v) { return std::to_string(v); }
inline std::string csv_number(unsigned long long v) { return std::to_string(v); }

}  // namespace robincap
