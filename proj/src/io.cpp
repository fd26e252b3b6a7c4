#include "timescales/io.hpp"

#include <cstdio>

namespace timescales::io {

std::string format_g17(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

}  // namespace timescales::io
