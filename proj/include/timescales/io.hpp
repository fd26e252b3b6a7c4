#pragma once

#include <string>

namespace timescales::io {

// Shortest round-trippable decimal form, 17 significant digits.
std::string format_g17(double value);

}  // namespace timescales::io
