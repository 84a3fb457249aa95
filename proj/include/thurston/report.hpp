// Locale-independent table output shared by the command-line tool: numbers at
// 17 significant digits so doubles survive a round trip, RFC-4180-style CSV
// quoting with '.' as the decimal separator.
#pragma once

#include <cstdio>
#include <string>
#include <vector>

namespace thurston {

inline std::string format_sig(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    out += c;
    if (c == '"') out += '"';
  }
  out += '"';
  return out;
}

inline std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(fields[i]);
  }
  out += '\n';
  return out;
}

}  // namespace thurston
