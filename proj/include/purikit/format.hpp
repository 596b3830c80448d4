#pragma once

#include <charconv>
#include <optional>
#include <string>

namespace purikit {

/// Shortest-safe round-trip text: 17 significant digits, scientific notation.
inline std::string format_double(double x) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::scientific, 16);
  return std::string(buf, res.ptr);
}

/// "na" for missing or non-finite values.
inline std::string format_or_na(std::optional<double> x) {
  if (!x || *x != *x) return "na";
  return format_double(*x);
}

/// `RESULT status=<s> p=<n> idem_err=<x> energy=<x>`, with "na" for
/// missing fields. The command-line tool prints it as its last stdout line.
inline std::string result_line(const std::string& status, std::optional<int> p,
                               std::optional<double> idem_err, std::optional<double> energy) {
  return "RESULT status=" + status + " p=" + (p ? std::to_string(*p) : std::string("na")) +
         " idem_err=" + format_or_na(idem_err) + " energy=" + format_or_na(energy);
}

}  // namespace purikit
