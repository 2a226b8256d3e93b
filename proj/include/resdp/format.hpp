#pragma once

#include <cstdio>
#include <string>

namespace resdp {

/// Shortest-safe decimal form with 17 significant digits; round-trips doubles.
inline std::string format_g17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace resdp
