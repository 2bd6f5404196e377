#pragma once

#include <charconv>
#include <cstdio>
#include <string>

#include "edd/common.hpp"

namespace edd {

// Lossless double -> text (round-trips bit-exactly via %.17g). All emitted
// CSVs use this so re-runs are byte-identical and reloads are exact.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Strict locale-independent parse; the full token must be consumed.
inline double parse_double(const std::string& s, const std::string& context) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw DataError(context + ": cannot parse number '" + s + "'");
  return v;
}

inline long parse_long(const std::string& s, const std::string& context) {
  long v = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw DataError(context + ": cannot parse integer '" + s + "'");
  return v;
}

}  // namespace edd
