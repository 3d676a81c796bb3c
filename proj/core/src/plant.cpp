#include "chromdev/plant.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <ostream>
#include <thread>

#include <nlohmann/json.hpp>

#include "chromdev/error.hpp"

namespace chromdev::plant {

namespace {

constexpr double kTransient = 300.0;  // s before the level band is enforced
constexpr std::size_t kRateLag = 10;  // samples between rate estimates

std::size_t window_samples(const PlantConfig& c) {
  return static_cast<std::size_t>(std::llround(c.stabilization.window / c.dt));
}

}  // namespace

std::string_view to_string(Phase p) noexcept {
  switch (p) {
    case Phase::idle: return "Idle";
    case Phase::equilibrate: return "Equilibrate";
    case Phase::load: return "Load";
    case Phase::wash: return "Wash";
    case Phase::elute: return "Elute";
    case Phase::regenerate: return "Regenerate";
  }
  return "?";
}

std::string_view to_string(EventKind k) noexcept {
  switch (k) {
    case EventKind::experiment_started: return "ExperimentStarted";
    case EventKind::phase_started: return "PhaseStarted";
    case EventKind::phase_completed: return "PhaseCompleted";
    case EventKind::fraction_ready: return "FractionReady";
    case EventKind::experiment_completed: return "ExperimentCompleted";
    case EventKind::alarm: return "Alarm";
  }
  return "?";
}

double PlantConfig::cross_section() const {
  const double r = column_inner_diameter / 2.0;
  return std::numbers::pi * r * r;
}

double PlantConfig::bed_volume() const { return cross_section() * bed_height; }

double PlantConfig::level_limit() const { return column_height - bed_height; }

void PlantConfig::validate() const {
  if (!(column_inner_diameter > 0.0) || !(bed_height > 0.0)) {
    throw Error(Errc::invalid_argument, "column geometry must be positive");
  }
  if (!(level_limit() > level_setpoint) || !(level_setpoint > 0.0)) {
    throw Error(Errc::invalid_argument, "level setpoint must lie between bed and column top");
  }
  if (!(dt > 0.0)) throw Error(Errc::invalid_argument, "dt must be positive");
  if (!(equil_flow > 0.0) || !(regen_flow > 0.0)) {
    throw Error(Errc::invalid_argument, "equilibration and regeneration flows must be positive");
  }
  for (double s : {noise.tt_purity, noise.tt_productivity, noise.fg_purity}) {
    if (!(s >= 0.0)) throw Error(Errc::invalid_argument, "noise_rel_sd must be >= 0");
  }
  if (!(stabilization.window >= 2.0 * dt) || !(stabilization.rel_threshold > 0.0)) {
    throw Error(Errc::invalid_argument, "stabilization window must span at least two steps");
  }
  if (!(level_filter_alpha > 0.0 && level_filter_alpha <= 1.0)) {
    throw Error(Errc::invalid_argument, "level filter alpha must lie in (0, 1]");
  }
}

Plant::Plant(PlantConfig config)
    : config_((config.validate(), std::move(config))),
      sensors_(config_.sensor_noise),
      detector_(window_samples(config_), config_.stabilization.rel_threshold) {
  std::seed_seq sensor_seed{config_.seed, std::uint64_t{1}};
  std::seed_seq fraction_seed{config_.seed, std::uint64_t{2}};
  sensor_rng_.seed(sensor_seed);
  fraction_rng_.seed(fraction_seed);
  state_.level = config_.level_setpoint;
  filtered_level_ = state_.level;
  frame_ = sensors_.observe(0.0, state_.level, sensor_rng_);
}

std::uint64_t Plant::submit_experiment(const ExperimentSpec& spec) {
  spec.params.validate();
  if (!config_.batch_table.contains(spec.batch_id)) {
    throw Error(Errc::unknown_batch, "batch '" + spec.batch_id + "' is not in the batch table");
  }
  if (!config_.queueing && !idle()) {
    throw Error(Errc::plant_busy, "an experiment is already running");
  }
  const std::uint64_t id = next_id_++;
  ExperimentTrace t;
  t.id = id;
  t.spec = spec;
  traces_.emplace(id, std::move(t));
  queue_.push_back(id);
  return id;
}

const ExperimentTrace& Plant::trace(std::uint64_t experiment_id) const {
  const auto it = traces_.find(experiment_id);
  if (it == traces_.end()) {
    throw Error(Errc::invalid_argument, "unknown experiment id " + std::to_string(experiment_id));
  }
  return it->second;
}

assay::FractionRecord Plant::emit_fraction(std::uint64_t experiment_id) const {
  const auto& t = trace(experiment_id);
  if (!t.fraction) {
    throw Error(Errc::wrong_phase, "elution of experiment " + std::to_string(experiment_id) +
                                       " has not completed");
  }
  return *t.fraction;
}

std::vector<Event> Plant::step(double dt) {
  std::vector<Event> events;
  const auto n = static_cast<std::size_t>(std::llround(dt / config_.dt));
  for (std::size_t i = 0; i < n; ++i) tick(events);
  return events;
}

std::vector<Event> Plant::run_until_idle() {
  std::vector<Event> events;
  while (!idle()) tick(events);
  return events;
}

double Plant::phase_flow(Phase phase) const {
  const auto& x = state_.current_experiment;
  switch (phase) {
    case Phase::equilibrate: return config_.equil_flow;
    case Phase::load: return x->params.feed_flow();
    case Phase::wash: return x->params.wash_flow();
    case Phase::elute: return x->params.elution_flow();
    case Phase::regenerate: return config_.regen_flow;
    case Phase::idle: return 0.0;
  }
  return 0.0;
}

Solvent Plant::phase_solvent(Phase phase) const {
  switch (phase) {
    case Phase::equilibrate: return Solvent::water;
    case Phase::load: return Solvent::feed;
    case Phase::wash: return Solvent::ethanol20;
    case Phase::elute: return Solvent::ethanol75;
    case Phase::regenerate: return Solvent::ethanol95;
    case Phase::idle: return Solvent::water;
  }
  return Solvent::water;
}

void Plant::emit(std::vector<Event>& events, EventKind kind, std::string detail) {
  Event e{state_.sim_clock, state_.experiment_id.value_or(0), kind, state_.phase,
          std::move(detail)};
  if (event_log_) {
    nlohmann::json j{{"t", e.time},
                     {"experiment_id", e.experiment_id},
                     {"event", to_string(e.kind)},
                     {"phase", to_string(e.phase)},
                     {"detail", e.detail}};
    *event_log_ << j.dump() << '\n';
  }
  if (kind == EventKind::alarm && state_.experiment_id) ++traces_.at(*state_.experiment_id).alarms;
  events.push_back(std::move(e));
}

void Plant::start_next(std::vector<Event>& events) {
  const std::uint64_t id = queue_.front();
  queue_.pop_front();
  auto& t = traces_.at(id);
  state_.experiment_id = id;
  state_.current_experiment = t.spec;
  t.start_time = state_.sim_clock;
  emit(events, EventKind::experiment_started, t.spec.batch_id + "/" + t.spec.fraction_id);
  enter_phase(Phase::equilibrate, events);
}

void Plant::enter_phase(Phase phase, std::vector<Event>& events) {
  state_.phase = phase;
  state_.phase_elapsed = 0.0;
  state_.valves.fill(false);
  if (phase != Phase::idle) {
    state_.valves[static_cast<std::size_t>(phase_solvent(phase))] = true;
    state_.valves[phase == Phase::elute ? 6 : 5] = true;
    state_.valves[8] = true;
  }
  state_.p1_flow = phase_flow(phase);
  state_.p2_flow = state_.p1_flow;
  detector_.reset();
  if (phase != Phase::idle) emit(events, EventKind::phase_started);
}

void Plant::finish_phase(std::vector<Event>& events, const std::string& detail) {
  emit(events, EventKind::phase_completed, detail);
  auto& t = traces_.at(*state_.experiment_id);
  switch (state_.phase) {
    case Phase::equilibrate:
      t.equilibrate_duration = state_.phase_elapsed;
      enter_phase(Phase::load, events);
      break;
    case Phase::load: enter_phase(Phase::wash, events); break;
    case Phase::wash: enter_phase(Phase::elute, events); break;
    case Phase::elute:
      t.fraction = synthesize_fraction(t.spec);
      t.fraction_time = state_.sim_clock;
      emit(events, EventKind::fraction_ready, t.spec.fraction_id);
      enter_phase(Phase::regenerate, events);
      break;
    case Phase::regenerate:
      t.regenerate_duration = state_.phase_elapsed;
      t.end_time = state_.sim_clock;
      t.completed = true;
      emit(events, EventKind::experiment_completed);
      enter_phase(Phase::idle, events);
      state_.experiment_id.reset();
      state_.current_experiment.reset();
      if (!queue_.empty()) start_next(events);
      break;
    case Phase::idle: break;
  }
}

void Plant::control_level() {
  const double meas = frame_.level;
  filtered_level_ += config_.level_filter_alpha * (meas - filtered_level_);
  level_history_.push_back(filtered_level_);
  if (level_history_.size() > kRateLag + 1) level_history_.pop_front();
  const double rate = level_history_.size() > kRateLag
                          ? (level_history_.back() - level_history_.front()) /
                                (static_cast<double>(kRateLag) * config_.dt)
                          : 0.0;
  const double adj = fuzzy_control(filtered_level_ - config_.level_setpoint, rate);
  state_.p2_flow = std::max(0.0, state_.p2_flow + adj);
}

void Plant::tick(std::vector<Event>& events) {
  if (state_.phase == Phase::idle && !queue_.empty()) start_next(events);
  const double dt = config_.dt;

  const double q_in = overflow_alarm_ ? 0.0 : state_.p1_flow;
  const double q_out = underflow_alarm_ ? 0.0 : state_.p2_flow * (1.0 + config_.outlet_pump_bias);
  const double bv = config_.bed_volume();
  state_.level += (q_in - q_out) * bv / 3600.0 / config_.cross_section() * dt;
  sensors_.advance(phase_solvent(state_.phase), q_in, dt);
  state_.sim_clock += dt;
  state_.phase_elapsed += dt;

  if (state_.phase != Phase::idle) {
    if (!overflow_alarm_ && state_.level > config_.level_limit()) {
      overflow_alarm_ = true;
      emit(events, EventKind::alarm, "LevelHigh");
    } else if (overflow_alarm_ && state_.level < config_.level_setpoint + 1.0) {
      overflow_alarm_ = false;
    }
    if (!underflow_alarm_ && state_.level <= 0.0) {
      underflow_alarm_ = true;
      emit(events, EventKind::alarm, "LevelLow");
    } else if (underflow_alarm_ && state_.level > config_.level_setpoint - 1.0) {
      underflow_alarm_ = false;
    }
  }
  state_.level = std::max(0.0, state_.level);

  frame_ = sensors_.observe(state_.sim_clock, state_.level, sensor_rng_);
  if (sensor_log_ && state_.sim_clock >= next_sensor_log_ - 1e-9) {
    next_sensor_log_ = state_.sim_clock + config_.sensor_log_interval;
    nlohmann::json j{{"t", frame_.timestamp},
                     {"experiment_id", state_.experiment_id.value_or(0)},
                     {"phase", to_string(state_.phase)},
                     {"ph", frame_.ph},
                     {"conductivity", frame_.conductivity},
                     {"orp", frame_.orp},
                     {"uv", frame_.uv_absorbance},
                     {"nir", frame_.nir_absorbance},
                     {"level", frame_.level},
                     {"temperature", frame_.temperature}};
    *sensor_log_ << j.dump() << '\n';
  }

  if (config_.acceleration > 0.0) {
    std::this_thread::sleep_for(std::chrono::duration<double>(dt / config_.acceleration));
  }
  if (state_.phase == Phase::idle) return;

  control_level();
  auto& t = traces_.at(*state_.experiment_id);
  if (state_.phase_elapsed > kTransient) {
    t.max_level_deviation =
        std::max(t.max_level_deviation, std::abs(state_.level - config_.level_setpoint));
  }

  const auto& x = state_.current_experiment->params;
  const auto timed_done = [&](double hours) {
    return state_.phase_elapsed >= hours * 3600.0 - 1e-9;
  };
  switch (state_.phase) {
    case Phase::equilibrate:
    case Phase::regenerate:
      detector_.push(frame_.conductivity, frame_.uv_absorbance);
      if (detector_.stable()) {
        (state_.phase == Phase::equilibrate ? t.equilibrate_stabilized
                                            : t.regenerate_stabilized) = true;
        finish_phase(events, "stabilized");
      } else if (state_.phase_elapsed >= config_.stabilization.timeout) {
        emit(events, EventKind::alarm, "StabilizationTimeout");
        finish_phase(events, "timeout");
      }
      break;
    case Phase::load:
      if (timed_done(x.feed_time())) finish_phase(events);
      break;
    case Phase::wash:
      if (timed_done(x.wash_time())) finish_phase(events);
      break;
    case Phase::elute:
      if (timed_done(x.elution_time())) finish_phase(events);
      break;
    case Phase::idle: break;
  }
}

assay::FractionRecord synthesize_fraction(const TruthModels& truth, const FractionNoise& noise,
                                          const ProcessParams& params,
                                          const MaterialAttributes& attrs, double bed_volume,
                                          const std::array<double, 3>& deviates) {
  double y1 = rsm::predict(truth.tt_purity, params, attrs) * (1.0 + noise.tt_purity * deviates[0]);
  double y2 = rsm::predict(truth.tt_productivity, params, attrs) *
              (1.0 + noise.tt_productivity * deviates[1]);
  double y3 = rsm::predict(truth.fg_purity, params, attrs) * (1.0 + noise.fg_purity * deviates[2]);
  y1 = std::clamp(y1, 1e-6, 100.0);
  y3 = std::clamp(y3, 0.0, 100.0 - y1);
  y2 = std::max(y2, 1e-9);

  assay::FractionRecord f;
  f.params = params;
  f.batch_id = attrs.batch_id;
  f.process_time = assay::process_time(params);
  f.m_tt_total = y2 * f.process_time;
  f.m_ts_total = f.m_tt_total / (y1 / 100.0);
  f.m_fg_total = f.m_ts_total * (y3 / 100.0);
  f.volume = params.elution_flow() * params.elution_time() * bed_volume;
  return f;
}

assay::FractionRecord Plant::synthesize_fraction(const ExperimentSpec& spec) {
  std::normal_distribution<double> z(0.0, 1.0);
  // All three deviates are drawn every time so the stream does not depend on noise levels.
  std::array<double, 3> e{};
  for (double& v : e) v = z(fraction_rng_);
  auto f = plant::synthesize_fraction(config_.truth, config_.noise, spec.params,
                                      config_.batch_table.at(spec.batch_id), config_.bed_volume(), e);
  f.batch_id = spec.batch_id;
  return f;
}

}  // namespace chromdev::plant
