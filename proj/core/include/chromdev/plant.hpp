#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chromdev/assay.hpp"
#include "chromdev/fuzzy.hpp"
#include "chromdev/process.hpp"
#include "chromdev/rsm.hpp"

namespace chromdev::plant {

enum class Phase { idle, equilibrate, load, wash, elute, regenerate };

std::string_view to_string(Phase p) noexcept;

enum class Solvent { water, feed, ethanol20, ethanol75, ethanol95 };

std::string_view to_string(Solvent s) noexcept;

/// Steady readings a sensor settles to under each solvent.
struct SolventSignature {
  double ph = 7.0;
  double conductivity = 0.0;  // uS/cm
  double orp = 0.0;           // mV
  double uv = 0.0;            // AU
  double nir = 0.0;           // AU
};

SolventSignature signature(Solvent s) noexcept;

/// Latent surfaces driving the simulated fractions: TT purity (Y1), TT
/// productivity (Y2) and FG purity (Y3). FG productivity follows from mass
/// bookkeeping.
struct TruthModels {
  rsm::RegressionModel tt_purity;
  rsm::RegressionModel tt_productivity;
  rsm::RegressionModel fg_purity;
};

/// Relative standard deviation of the multiplicative noise on each latent.
/// Defaults come from calibrate_noise(): refits of the published term sets
/// on the simulated screening campaign then match the published R^2.
struct FractionNoise {
  double tt_purity = 0.1616;
  double tt_productivity = 0.2607;
  double fg_purity = 0.0906;
};

/// Fraction totals whose indicators equal the truth predictions scaled by
/// (1 + sd * deviate) for Y1, Y2 and Y3 in that order.
assay::FractionRecord synthesize_fraction(const TruthModels& truth, const FractionNoise& noise,
                                          const ProcessParams& params,
                                          const MaterialAttributes& attrs, double bed_volume,
                                          const std::array<double, 3>& deviates);

struct SensorNoise {
  double relative = 0.002;   // conductivity and UV
  double ph = 0.01;
  double orp = 1.0;          // mV
  double nir = 0.002;
  double temperature = 0.05; // degC
  double level = 0.05;       // cm
};

struct StabilizationConfig {
  double rel_threshold = 0.01;
  double window = 120.0;      // s
  double timeout = 4.0 * 3600.0;  // s, alarm and advance when exceeded
};

struct PlantConfig {
  double column_inner_diameter = 3.0;  // cm
  double bed_height = 36.0;            // cm
  double column_height = 45.6;         // cm
  double level_setpoint = 3.0;         // cm above bed
  double equil_flow = 3.0;             // BV/h
  double regen_flow = 3.0;             // BV/h
  std::map<std::string, MaterialAttributes> batch_table;
  TruthModels truth;
  FractionNoise noise;
  SensorNoise sensor_noise;
  StabilizationConfig stabilization;
  /// Relative gain error of the outlet pump; the level loop has to absorb it.
  double outlet_pump_bias = 0.03;
  double level_filter_alpha = 0.2;
  std::uint64_t seed = 1;
  double dt = 1.0;                    // s
  double sensor_log_interval = 60.0;  // s
  /// Simulated seconds per wall-clock second; 0 runs as fast as possible.
  double acceleration = 0.0;
  bool queueing = true;

  [[nodiscard]] double cross_section() const;  // cm^2
  [[nodiscard]] double bed_volume() const;     // mL
  [[nodiscard]] double level_limit() const;    // cm above bed before overflow

  void validate() const;
};

struct ExperimentSpec {
  ProcessParams params;
  std::string batch_id;
  std::string fraction_id = "F1";
};

constexpr std::size_t kValveCount = 9;

/// V1..V5 inlets (water, feed, 20 %, 75 %, 95 % ethanol), V6 waste,
/// V7 fraction collector, V8 bypass, V9 vent.
using ValveStates = std::array<bool, kValveCount>;

struct PlantState {
  Phase phase = Phase::idle;
  double sim_clock = 0.0;
  double phase_elapsed = 0.0;
  double level = 3.0;
  double p1_flow = 0.0;  // BV/h commanded inlet
  double p2_flow = 0.0;  // BV/h commanded outlet
  ValveStates valves{};
  std::optional<std::uint64_t> experiment_id;
  std::optional<ExperimentSpec> current_experiment;
};

struct SensorFrame {
  double timestamp = 0.0;
  double ph = 0.0;
  double conductivity = 0.0;
  double orp = 0.0;
  double uv_absorbance = 0.0;
  double nir_absorbance = 0.0;
  double level = 0.0;
  double temperature = 0.0;
};

enum class EventKind {
  experiment_started,
  phase_started,
  phase_completed,
  fraction_ready,
  experiment_completed,
  alarm,
};

std::string_view to_string(EventKind k) noexcept;

struct Event {
  double time = 0.0;
  std::uint64_t experiment_id = 0;
  EventKind kind = EventKind::phase_started;
  Phase phase = Phase::idle;
  std::string detail;
};

/// True when the window holds `window_len` samples and their standard
/// deviation over the absolute mean is below `rel_threshold`.
bool stabilization_detector(std::span<const double> window, double rel_threshold,
                            std::size_t window_len);

/// Rolling version over two signals with O(1) updates.
class StabilizationDetector {
public:
  StabilizationDetector(std::size_t window_len, double rel_threshold);

  void push(double a, double b);
  void reset();
  [[nodiscard]] bool stable() const;

private:
  struct Channel {
    std::deque<double> values;
    double sum = 0.0;
    double sum_sq = 0.0;
  };
  bool channel_stable(const Channel& c) const;

  std::size_t window_len_;
  double rel_threshold_;
  Channel a_;
  Channel b_;
};

/// First-order sensor channels relaxing toward the signature of the solvent
/// currently flowing, with time constant of one bed-volume turnover.
class SensorModel {
public:
  explicit SensorModel(SensorNoise noise, Solvent initial = Solvent::ethanol20);

  /// Advances the latent channels by dt seconds at `flow` BV/h.
  void advance(Solvent solvent, double flow, double dt);
  [[nodiscard]] SensorFrame observe(double timestamp, double level, std::mt19937_64& rng) const;
  [[nodiscard]] const SolventSignature& latent() const { return latent_; }

private:
  SensorNoise noise_;
  SolventSignature latent_;
};

struct ExperimentTrace {
  std::uint64_t id = 0;
  ExperimentSpec spec;
  double start_time = 0.0;
  double fraction_time = 0.0;
  double end_time = 0.0;
  double equilibrate_duration = 0.0;
  double regenerate_duration = 0.0;
  bool equilibrate_stabilized = false;
  bool regenerate_stabilized = false;
  /// Largest |level - setpoint| seen later than 300 s into any phase.
  double max_level_deviation = 0.0;
  std::size_t alarms = 0;
  std::optional<assay::FractionRecord> fraction;
  bool completed = false;
};

class Plant {
public:
  explicit Plant(PlantConfig config);

  /// Queues an experiment and returns its id (1, 2, ...). Throws
  /// UnknownBatch for a batch outside the table and PlantBusy when queueing
  /// is disabled and an experiment is active.
  std::uint64_t submit_experiment(const ExperimentSpec& spec);

  /// Advances the simulation by dt seconds in steps of config.dt.
  std::vector<Event> step(double dt);

  /// Steps until every queued experiment completes.
  std::vector<Event> run_until_idle();

  /// Fraction of a finished elution. Throws WrongPhase before the elution of
  /// that experiment has completed.
  [[nodiscard]] assay::FractionRecord emit_fraction(std::uint64_t experiment_id) const;

  [[nodiscard]] const PlantState& state() const { return state_; }
  [[nodiscard]] bool idle() const { return state_.phase == Phase::idle && queue_.empty(); }
  [[nodiscard]] const SensorFrame& last_frame() const { return frame_; }
  [[nodiscard]] const ExperimentTrace& trace(std::uint64_t experiment_id) const;
  [[nodiscard]] const PlantConfig& config() const { return config_; }

  /// Optional JSONL sinks. Sensor frames are written every
  /// config.sensor_log_interval seconds.
  void set_sensor_log(std::ostream* out) { sensor_log_ = out; }
  void set_event_log(std::ostream* out) { event_log_ = out; }

  /// Direct level disturbance, used to exercise the controller.
  void set_level(double level) { state_.level = level; }

private:
  void tick(std::vector<Event>& events);
  void start_next(std::vector<Event>& events);
  void enter_phase(Phase phase, std::vector<Event>& events);
  void finish_phase(std::vector<Event>& events, const std::string& detail = {});
  void control_level();
  void emit(std::vector<Event>& events, EventKind kind, std::string detail = {});
  assay::FractionRecord synthesize_fraction(const ExperimentSpec& spec);
  [[nodiscard]] double phase_flow(Phase phase) const;
  [[nodiscard]] Solvent phase_solvent(Phase phase) const;

  PlantConfig config_;
  PlantState state_;
  SensorModel sensors_;
  SensorFrame frame_;
  StabilizationDetector detector_;
  std::mt19937_64 sensor_rng_;
  std::mt19937_64 fraction_rng_;
  std::deque<std::uint64_t> queue_;
  std::map<std::uint64_t, ExperimentTrace> traces_;
  std::uint64_t next_id_ = 1;
  std::deque<double> level_history_;
  double filtered_level_ = 0.0;
  double next_sensor_log_ = 0.0;
  bool overflow_alarm_ = false;
  bool underflow_alarm_ = false;
  std::ostream* sensor_log_ = nullptr;
  std::ostream* event_log_ = nullptr;
};

}  // namespace chromdev::plant
