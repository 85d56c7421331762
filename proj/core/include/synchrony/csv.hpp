#pragma once

#include <cstdio>
#include <string>

namespace synchrony::csv {

// Shortest-ish deterministic rendering; %.12g keeps files readable while
// staying byte-stable across reruns of the same build.
inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline std::string num(int v) { return std::to_string(v); }

}  // namespace synchrony::csv
