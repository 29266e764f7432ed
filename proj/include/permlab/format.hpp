#pragma once

#include <string>

namespace permlab {

/// Fixed 17-significant-digit rendering, enough to round-trip a double.
/// All report serializers use this so output bytes are reproducible.
std::string fmt_g17(double value);

}  // namespace permlab
