#pragma once

#include <string>

namespace qx {

/// printf "%.12g"; the single number format used in every text and CSV output.
std::string fmt_num(double x);

} // namespace qx
