#pragma once

#include <charconv>
#include <string>

namespace effhmm::detail {

// Shortest text that parses back to the same double.
inline std::string format_number(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, end);
}

}  // namespace effhmm::detail
