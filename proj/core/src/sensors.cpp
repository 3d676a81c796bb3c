#include <cmath>

#include "chromdev/plant.hpp"

namespace chromdev::plant {

std::string_view to_string(Solvent s) noexcept {
  switch (s) {
    case Solvent::water: return "water";
    case Solvent::feed: return "feed";
    case Solvent::ethanol20: return "ethanol20";
    case Solvent::ethanol75: return "ethanol75";
    case Solvent::ethanol95: return "ethanol95";
  }
  return "?";
}

SolventSignature signature(Solvent s) noexcept {
  switch (s) {
    case Solvent::water: return {7.0, 5.0, 200.0, 0.02, 0.05};
    case Solvent::feed: return {5.5, 1800.0, 150.0, 1.8, 0.8};
    case Solvent::ethanol20: return {6.8, 300.0, 220.0, 0.6, 0.3};
    case Solvent::ethanol75: return {7.2, 60.0, 250.0, 1.2, 0.9};
    case Solvent::ethanol95: return {7.4, 20.0, 260.0, 0.1, 1.1};
  }
  return {};
}

bool stabilization_detector(std::span<const double> window, double rel_threshold,
                            std::size_t window_len) {
  if (window_len < 2 || window.size() < window_len) return false;
  const auto recent = window.last(window_len);
  double mean = 0.0;
  for (double v : recent) mean += v;
  mean /= static_cast<double>(window_len);
  double ss = 0.0;
  for (double v : recent) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(window_len - 1));
  return sd < rel_threshold * std::abs(mean);
}

StabilizationDetector::StabilizationDetector(std::size_t window_len, double rel_threshold)
    : window_len_(window_len < 2 ? 2 : window_len), rel_threshold_(rel_threshold) {}

void StabilizationDetector::push(double a, double b) {
  for (auto [c, v] : {std::pair{&a_, a}, std::pair{&b_, b}}) {
    c->values.push_back(v);
    c->sum += v;
    c->sum_sq += v * v;
    if (c->values.size() > window_len_) {
      const double old = c->values.front();
      c->values.pop_front();
      c->sum -= old;
      c->sum_sq -= old * old;
    }
  }
}

void StabilizationDetector::reset() {
  a_ = {};
  b_ = {};
}

bool StabilizationDetector::channel_stable(const Channel& c) const {
  if (c.values.size() < window_len_) return false;
  const double n = static_cast<double>(window_len_);
  const double mean = c.sum / n;
  const double var = std::max(0.0, (c.sum_sq - n * mean * mean) / (n - 1.0));
  return std::sqrt(var) < rel_threshold_ * std::abs(mean);
}

bool StabilizationDetector::stable() const { return channel_stable(a_) && channel_stable(b_); }

SensorModel::SensorModel(SensorNoise noise, Solvent initial)
    : noise_(noise), latent_(signature(initial)) {}

void SensorModel::advance(Solvent solvent, double flow, double dt) {
  if (flow <= 0.0) return;
  const double tau = 3600.0 / flow;
  const double f = 1.0 - std::exp(-dt / tau);
  const SolventSignature target = signature(solvent);
  latent_.ph += (target.ph - latent_.ph) * f;
  latent_.conductivity += (target.conductivity - latent_.conductivity) * f;
  latent_.orp += (target.orp - latent_.orp) * f;
  latent_.uv += (target.uv - latent_.uv) * f;
  latent_.nir += (target.nir - latent_.nir) * f;
}

SensorFrame SensorModel::observe(double timestamp, double level, std::mt19937_64& rng) const {
  std::normal_distribution<double> z(0.0, 1.0);
  SensorFrame f;
  f.timestamp = timestamp;
  f.ph = latent_.ph + noise_.ph * z(rng);
  f.conductivity = latent_.conductivity * (1.0 + noise_.relative * z(rng));
  f.orp = latent_.orp + noise_.orp * z(rng);
  f.uv_absorbance = latent_.uv * (1.0 + noise_.relative * z(rng));
  f.nir_absorbance = latent_.nir + noise_.nir * z(rng);
  f.level = std::max(0.0, level + noise_.level * z(rng));
  f.temperature = 25.0 + noise_.temperature * z(rng);
  return f;
}

}  // namespace chromdev::plant
