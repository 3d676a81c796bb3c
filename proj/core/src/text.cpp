#include "chromdev/text.hpp"

#include <charconv>
#include <fmt/format.h>

#include "chromdev/error.hpp"

namespace chromdev::text {

std::string sig6(double value) {
  if (value == 0.0) return "0";  // folds -0 into 0
  return fmt::format("{:.6g}", value);
}

std::vector<std::string> split(std::string_view line, char delimiter) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(delimiter, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      return out;
    }
    out.emplace_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view s, std::string_view what) {
  s = trim(s);
  double value = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (s.empty() || ec != std::errc{} || ptr != end) {
    throw Error(Errc::parse_error,
                "cannot parse " + std::string(what) + " from '" + std::string(s) + "'");
  }
  return value;
}

}  // namespace chromdev::text
