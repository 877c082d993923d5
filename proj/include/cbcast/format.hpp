#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace cbcast {

// Locale-independent, round-trip-stable rendering for CSV/JSON text output.
inline std::string format_number(double value) {
  if (std::isnan(value))
    return "nan";
  if (std::isinf(value))
    return value > 0 ? "inf" : "-inf";
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.12g", value);
  return buffer;
}

} // namespace cbcast
