#pragma once

#include <string>

namespace filterlab {

// Shortest representation that round-trips; locale-independent.
std::string format_double(double value);

// General format with the given number of significant digits; locale-independent.
std::string format_significant(double value, int digits = 3);

}  // namespace filterlab
