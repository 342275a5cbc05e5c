#include "core/support/numfmt.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace semiflow {

std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string fmt_double_sig(double v, int digits) {
  if (!std::isfinite(v)) return fmt_double(v);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return std::string(buf);
}

}  // namespace semiflow
