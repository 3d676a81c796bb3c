#pragma once

namespace chromdev::plant {

/// Universes of the level controller. Inputs outside them saturate.
inline constexpr double kErrorSpan = 3.0;   // cm
inline constexpr double kRateSpan = 0.05;   // cm/s
inline constexpr double kOutputSpan = 1.0;  // BV/h
inline constexpr double kMaxAdjustment = 0.5;

/// Mamdani controller over five triangular sets (NL NS Z PS PL) per input.
/// Rule (i, j) fires output set clamp(i + j) with sets indexed -2..2, min
/// implication, max aggregation, centroid over 401 output samples.
/// Positive error (level above setpoint) raises the outlet pump flow.
double fuzzy_control(double level_error, double error_rate);

}  // namespace chromdev::plant
