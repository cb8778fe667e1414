#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

namespace coalesce::io {

/// Shortest round-trip decimal form of x (at most 17 significant digits).
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";  // folds -0
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  std::string s(buf, res.ptr);
  // plain form may spell a large integer with trailing zeros past 17 digits
  if (s.find('e') == std::string::npos) {
    const auto first = s.find_first_of("123456789");
    const auto digits = std::count_if(s.begin() + static_cast<long>(first), s.end(), [](char c) { return c >= '0' && c <= '9'; });
    if (digits > 17) {
      res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::scientific);
      s.assign(buf, res.ptr);
    }
  }
  return s;
}

}  // namespace coalesce::io
