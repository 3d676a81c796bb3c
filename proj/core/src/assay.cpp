#include "chromdev/assay.hpp"

#include <cmath>

#include "chromdev/error.hpp"

namespace chromdev::assay {

void FractionRecord::validate() const {
  const bool finite = std::isfinite(m_tt_total) && std::isfinite(m_fg_total) &&
                      std::isfinite(m_ts_total) && std::isfinite(volume) &&
                      std::isfinite(process_time);
  if (!finite) throw Error(Errc::invalid_argument, "fraction record has non-finite fields");
  if (m_tt_total < 0.0 || m_fg_total < 0.0) {
    throw Error(Errc::invalid_argument, "fraction target masses must be non-negative");
  }
  if (m_tt_total + m_fg_total > m_ts_total) {
    throw Error(Errc::mass_exceeds_solids, "target masses exceed total solids");
  }
  if (!(volume > 0.0)) throw Error(Errc::invalid_argument, "fraction volume must be positive");
  if (!(process_time > 0.0)) throw Error(Errc::zero_time, "process time must be positive");
}

double purity(double m_target, double m_ts) {
  if (m_ts == 0.0) throw Error(Errc::zero_solids, "total solid mass is zero");
  if (m_ts < 0.0 || m_target < 0.0) {
    throw Error(Errc::invalid_argument, "masses must be non-negative");
  }
  if (m_target > m_ts) throw Error(Errc::mass_exceeds_solids, "target mass exceeds total solids");
  return m_target / m_ts * 100.0;
}

double productivity(double m_target, double hours) {
  if (hours == 0.0) throw Error(Errc::zero_time, "process time is zero");
  if (hours < 0.0 || m_target < 0.0) {
    throw Error(Errc::invalid_argument, "mass and time must be non-negative");
  }
  return m_target / hours;
}

double process_time(const ProcessParams& params) {
  return params.feed_time() + params.wash_time() + params.elution_time();
}

ResponseVector responses_from_fraction(const FractionRecord& fraction) {
  ResponseVector y;
  y.tt_purity = purity(fraction.m_tt_total, fraction.m_ts_total);
  y.fg_purity = purity(fraction.m_fg_total, fraction.m_ts_total);
  y.tt_productivity = productivity(fraction.m_tt_total, fraction.process_time);
  y.fg_productivity = productivity(fraction.m_fg_total, fraction.process_time);
  return y;
}

}  // namespace chromdev::assay
