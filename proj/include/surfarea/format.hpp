/// @file format.hpp
/// @brief locale-independent number formatting for CSV output

#pragma once

#include <cstdio>
#include <string>

namespace surfarea {

/// Shortest-ish decimal rendering with `digits` significant digits.
inline std::string format_real(double v, int digits = 15) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

}  // namespace surfarea
