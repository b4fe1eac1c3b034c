#include "filterlab/format.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace filterlab {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), end);
}

std::string format_significant(double value, int digits) {
  if (std::isnan(value)) return "nan";
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::general, digits);
  return std::string(buf.data(), end);
}

}  // namespace filterlab
