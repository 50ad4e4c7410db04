#pragma once

#include <charconv>
#include <cmath>
#include <string>
#include <system_error>

namespace graphpde {

/// Shortest decimal string that round-trips to the same double. All file
/// output goes through this so repeated runs are byte-identical.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

/// Strict double parser: the whole field must be consumed.
inline bool parse_double(const std::string& field, double& out) {
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last;
}

}  // namespace graphpde
