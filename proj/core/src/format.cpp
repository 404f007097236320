#include "schrocap/types.hpp"

#include <cmath>
#include <cstdio>

namespace schrocap {

std::string format_real(Real x) {
  if (std::isnan(x)) return {};
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string format_real_short(Real x) {
  if (std::isnan(x)) return {};
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

} // namespace schrocap
