#pragma once
// Deterministic CSV output: fixed %.12g formatting, '.' decimal separator,
// LF line endings, so identical inputs produce identical bytes.

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace mapm {

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  std::string s(buf);
  // Normalize the decimal separator in case the global locale was changed.
  for (char& ch : s)
    if (ch == ',') ch = '.';
  return s;
}

inline void write_csv_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (k) out << ',';
    out << cells[k];
  }
  out << '\n';
}

inline void write_csv_numbers(std::ostream& out, const std::vector<double>& values) {
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k) out << ',';
    out << format_number(values[k]);
  }
  out << '\n';
}

}  // namespace mapm
