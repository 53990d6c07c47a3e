#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace grace {

/// Shortest decimal string that parses back to exactly the same double.
/// Used for every number we print (CSV, error messages) so that repeated
/// runs emit byte-identical reports.
inline std::string fmt_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc()) return "nan";
  return std::string(buf, res.ptr);
}

}  // namespace grace
