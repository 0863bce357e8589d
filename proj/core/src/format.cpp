#include "xypurify/format.hpp"

#include <array>
#include <charconv>

namespace xypurify {

std::string format_number(double value) {
  std::array<char, 64> buf{};
  const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 12);
  return std::string(buf.data(), r.ptr);
}

}  // namespace xypurify
