#pragma once

#include <charconv>
#include <string>

namespace duality {

/// Shortest decimal string that round-trips the value exactly.
inline std::string format_double(double value) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

}  // namespace duality
