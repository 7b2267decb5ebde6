#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace melotype {

// Shortest-ish round-trip double formatting, stable across runs. All metric
// CSVs go through this so re-runs are byte-identical.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

// Quotes a CSV field only when it needs it.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

}  // namespace melotype
