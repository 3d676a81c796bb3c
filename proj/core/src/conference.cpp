#include <array>
#include <string_view>

#include "chromdev/doe.hpp"
#include "chromdev/error.hpp"

namespace chromdev::doe {

namespace {

// Rows written as '0', '+', '-'. Orders 2 (mod 4) are symmetric Paley
// matrices (GF(9) for order 10), orders 4 and 12 antisymmetric Paley, order 8
// is the normalized matrix whose fold-over reproduces the case-study design
// table, order 16 is the doubling [[C, C+I], [C-I, -C]] of the antisymmetric
// order-8 Paley matrix.
constexpr std::array<std::string_view, 2> kOrder2{"0+", "+0"};
constexpr std::array<std::string_view, 4> kOrder4{"0+++", "-0-+", "-+0-", "--+0"};
constexpr std::array<std::string_view, 6> kOrder6{"0+++++", "+0+--+", "++0+--",
                                                  "+-+0+-", "+--+0+", "++--+0"};
constexpr std::array<std::string_view, 8> kOrder8{"0+++++++", "+0--+-++", "++0--+-+",
                                                  "+++0--+-", "+-++0--+", "++-++0--",
                                                  "+-+-++0-", "+--+-++0"};
constexpr std::array<std::string_view, 10> kOrder10{
    "0+++++++++", "+0+++--+--", "++0+-+--+-", "+++0--+--+", "++--0+++--",
    "+-+-+0+-+-", "+--+++0--+", "++--+--0++", "+-+--+-+0+", "+--+--+++0"};
constexpr std::array<std::string_view, 12> kOrder12{
    "0+++++++++++", "-0-+---+++-+", "-+0-+---+++-", "--+0-+---+++",
    "-+-+0-+---++", "-++-+0-+---+", "-+++-+0-+---", "--+++-+0-+--",
    "---+++-+0-+-", "----+++-+0-+", "-+---+++-+0-", "--+---+++-+0"};
constexpr std::array<std::string_view, 14> kOrder14{
    "0+++++++++++++", "+0+-++----++-+", "++0+-++----++-", "+-+0+-++----++",
    "++-+0+-++----+", "+++-+0+-++----", "+-++-+0+-++---", "+--++-+0+-++--",
    "+---++-+0+-++-", "+----++-+0+-++", "++----++-+0+-+", "+++----++-+0+-",
    "+-++----++-+0+", "++-++----++-+0"};
constexpr std::array<std::string_view, 16> kOrder16{
    "0+++++++++++++++", "-0--+-++-+--+-++", "-+0--+-+-++--+-+", "-++0--+--+++--+-",
    "--++0--+--+++--+", "-+-++0---+-+++--", "--+-++0---+-+++-", "---+-++0---+-+++",
    "-+++++++0-------", "----+-+++0++-+--", "-+---+-++-0++-+-", "-++---+-+--0++-+",
    "--++---+++--0++-", "-+-++---+-+--0++", "--+-++--++-+--0+", "---+-++-+++-+--0"};

template <std::size_t N>
ConferenceMatrix from_rows(const std::array<std::string_view, N>& rows) {
  std::vector<int> entries;
  entries.reserve(N * N);
  for (std::string_view row : rows) {
    for (char c : row) entries.push_back(c == '+' ? 1 : (c == '-' ? -1 : 0));
  }
  return ConferenceMatrix(N, std::move(entries));
}

}  // namespace

ConferenceMatrix::ConferenceMatrix(std::size_t order, std::vector<int> entries)
    : order_(order), entries_(std::move(entries)) {
  if (entries_.size() != order_ * order_) {
    throw Error(Errc::invalid_argument, "conference matrix entry count mismatch");
  }
}

bool ConferenceMatrix::is_valid() const {
  const std::size_t n = order_;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const int v = (*this)(i, j);
      if (i == j ? v != 0 : (v != 1 && v != -1)) return false;
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      long dot = 0;
      for (std::size_t r = 0; r < n; ++r) dot += (*this)(r, a) * (*this)(r, b);
      const long expected = a == b ? static_cast<long>(n) - 1 : 0;
      if (dot != expected) return false;
    }
  }
  return true;
}

ConferenceMatrix conference_matrix(std::size_t order) {
  switch (order) {
    case 2: return from_rows(kOrder2);
    case 4: return from_rows(kOrder4);
    case 6: return from_rows(kOrder6);
    case 8: return from_rows(kOrder8);
    case 10: return from_rows(kOrder10);
    case 12: return from_rows(kOrder12);
    case 14: return from_rows(kOrder14);
    case 16: return from_rows(kOrder16);
    default:
      throw Error(Errc::unsupported_order,
                  "no conference matrix of order " + std::to_string(order) +
                      " (supported: even orders 2..16)");
  }
}

}  // namespace chromdev::doe
