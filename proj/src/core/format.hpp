#pragma once

#include <cstdio>
#include <string>

namespace snls {

/// Shortest-safe round-trip text for a double ("%.17g", C locale digits).
inline std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace snls
