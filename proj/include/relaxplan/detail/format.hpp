#ifndef RELAXPLAN_DETAIL_FORMAT_HPP
#define RELAXPLAN_DETAIL_FORMAT_HPP

#include <charconv>
#include <cstdio>
#include <string>

namespace relaxplan::detail {

/// Shortest decimal text that parses back to the same double.
inline std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

/// printf-style "%.6g", used where reports favour readability.
inline std::string general6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace relaxplan::detail

#endif  // RELAXPLAN_DETAIL_FORMAT_HPP
