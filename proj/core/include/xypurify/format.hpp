#pragma once

#include <string>

namespace xypurify {

/// Shortest of fixed/scientific with 12 significant digits, '.' decimal
/// separator, independent of the global locale.
std::string format_number(double value);

}  // namespace xypurify
