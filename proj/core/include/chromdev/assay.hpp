#pragma once

#include <string>

#include "chromdev/process.hpp"

namespace chromdev::assay {

/// Totals measured on one collected fraction. Per-volume quantities cancel in
/// every indicator, so the record keeps fraction totals.
struct FractionRecord {
  double m_tt_total = 0.0;  // mg, terpene trilactones
  double m_fg_total = 0.0;  // mg, flavonoid glycosides
  double m_ts_total = 0.0;  // mg, total solids
  double volume = 0.0;      // mL
  double process_time = 0.0;  // h
  std::string batch_id;
  ProcessParams params;

  /// Throws InvalidArgument when the mass or positivity invariants fail.
  void validate() const;

  friend bool operator==(const FractionRecord&, const FractionRecord&) = default;
};

/// Target share of total solids, in percent.
[[nodiscard]] double purity(double m_target, double m_ts);

/// Target mass per hour of processing.
[[nodiscard]] double productivity(double m_target, double hours);

/// Feed + wash + elution time. Equilibration and regeneration are excluded.
[[nodiscard]] double process_time(const ProcessParams& params);

[[nodiscard]] ResponseVector responses_from_fraction(const FractionRecord& fraction);

}  // namespace chromdev::assay
