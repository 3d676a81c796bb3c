#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace chromdev::text {

/// Shortest "%.6g" rendering used by every CSV and model file.
std::string sig6(double value);

/// Splits on a single-character delimiter without collapsing empties.
std::vector<std::string> split(std::string_view line, char delimiter);

std::string_view trim(std::string_view s);

/// Strict decimal parse; throws ParseError naming `what` on failure.
double parse_double(std::string_view s, std::string_view what);

}  // namespace chromdev::text
