#include "qx/format.hpp"

#include <cstdio>

namespace qx {

std::string fmt_num(double x) {
  if(x == 0) x = 0;  // drop the sign of negative zero
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

} // namespace qx
