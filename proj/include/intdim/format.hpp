#pragma once

#include <cstdio>
#include <string>

namespace intdim {

/// Shortest round-trippable decimal for a double.
inline std::string format_number(double value) {
  char buf[32];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, value);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == value) break;
  }
  return buf;
}

/// Fixed-width decimal used by every CSV writer so reruns are byte-identical.
inline std::string format_fixed(double value, int digits = 10) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

}  // namespace intdim
