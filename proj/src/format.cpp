#include "permlab/format.hpp"

#include <cstdio>

namespace permlab {

std::string fmt_g17(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

}  // namespace permlab
