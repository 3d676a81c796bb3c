#include "chromdev/fuzzy.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace chromdev::plant {

namespace {

constexpr int kSets = 5;
constexpr int kSamples = 401;

double triangle(double x, double a, double b, double c) {
  if (x <= a || x >= c) return 0.0;
  return x <= b ? (x - a) / (b - a) : (c - x) / (c - b);
}

// Set k (0..4) centred at (k - 2) * half_width; the outer sets behave as
// shoulders because the input is saturated at their centres first.
std::array<double, kSets> fuzzify(double x, double span) {
  const double h = span / 2.0;
  x = std::clamp(x, -span, span);
  std::array<double, kSets> mu{};
  for (int k = 0; k < kSets; ++k) {
    const double c = (k - 2) * h;
    mu[k] = x == c ? 1.0 : triangle(x, c - h, c, c + h);
  }
  return mu;
}

struct OutputTable {
  std::array<double, kSamples> u{};
  std::array<std::array<double, kSamples>, kSets> mu{};

  OutputTable() {
    const double h = kOutputSpan / 2.0;
    for (int s = 0; s < kSamples; ++s) {
      u[s] = -kOutputSpan + 2.0 * kOutputSpan * s / (kSamples - 1);
      for (int k = 0; k < kSets; ++k) {
        const double c = (k - 2) * h;
        mu[k][s] = triangle(u[s], c - h, c, c + h);
        if (u[s] == c) mu[k][s] = 1.0;
      }
    }
  }
};

const OutputTable& output_table() {
  static const OutputTable table;
  return table;
}

}  // namespace

double fuzzy_control(double level_error, double error_rate) {
  const auto me = fuzzify(level_error, kErrorSpan);
  const auto mr = fuzzify(error_rate, kRateSpan);
  const auto& out = output_table();

  std::array<double, kSets> strength{};
  for (int i = 0; i < kSets; ++i) {
    for (int j = 0; j < kSets; ++j) {
      const double w = std::min(me[i], mr[j]);
      if (w <= 0.0) continue;
      const int k = std::clamp((i - 2) + (j - 2), -2, 2) + 2;
      strength[k] = std::max(strength[k], w);
    }
  }

  double num = 0.0, den = 0.0;
  for (int s = 0; s < kSamples; ++s) {
    double agg = 0.0;
    for (int k = 0; k < kSets; ++k) {
      if (strength[k] > 0.0) agg = std::max(agg, std::min(strength[k], out.mu[k][s]));
    }
    num += agg * out.u[s];
    den += agg;
  }
  if (den == 0.0) return 0.0;
  return std::clamp(num / den, -kMaxAdjustment, kMaxAdjustment);
}

}  // namespace chromdev::plant
