#include <cmath>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>
#include <gtest/gtest.h>

#include "chromdev/assay.hpp"
#include "chromdev/case_study.hpp"
#include "chromdev/plant.hpp"
#include "test_util.hpp"

using namespace chromdev;
using namespace chromdev::plant;

namespace {

const ProcessParams kCenter{1, 1.5, 2, 1, 3, 1};

// Sample standard deviation over |mean|, written out longhand.
bool window_stable(const std::vector<double>& w, double thr) {
  double mean = 0;
  for (double v : w) mean += v / w.size();
  double ss = 0;
  for (double v : w) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / (w.size() - 1)) / std::abs(mean) < thr;
}

}  // namespace

TEST(StabilizationDetector, FreeFunction) {
  std::vector<double> flat(120, 5.0);
  EXPECT_TRUE(stabilization_detector(flat, 0.01, 120));
  EXPECT_FALSE(stabilization_detector(std::vector<double>(50, 5.0), 0.01, 120));
  std::vector<double> ramp;
  for (int i = 0; i < 120; ++i) ramp.push_back(1.0 + i * 0.05);
  EXPECT_FALSE(stabilization_detector(ramp, 0.01, 120));
}

TEST(StabilizationDetector, RollingMatchesWindowRecomputation) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0, 1);
  StabilizationDetector det(30, 0.01);
  std::vector<double> a, b;
  for (int t = 0; t < 600; ++t) {
    // Decaying transient then a quiet plateau.
    const double va = 100 + 50 * std::exp(-t / 40.0) + 0.2 * n(rng);
    const double vb = 7 + 2 * std::exp(-t / 60.0) + 0.01 * n(rng);
    det.push(va, vb);
    a.push_back(va);
    b.push_back(vb);
    bool expect = false;
    if (a.size() >= 30) {
      std::vector<double> wa(a.end() - 30, a.end()), wb(b.end() - 30, b.end());
      expect = window_stable(wa, 0.01) && window_stable(wb, 0.01);
    }
    EXPECT_EQ(det.stable(), expect) << t;
  }
  det.reset();
  EXPECT_FALSE(det.stable());
}

TEST(SensorModel, RelaxesTowardSignature) {
  SensorModel s(SensorNoise{0, 0, 0, 0, 0, 0}, Solvent::ethanol20);
  const auto target = signature(Solvent::feed);
  // tau = 3600 / flow seconds: after one tau at 1 BV/h the gap shrinks by e.
  const double start = s.latent().conductivity;
  for (int i = 0; i < 3600; ++i) s.advance(Solvent::feed, 1.0, 1.0);
  const double gap = (target.conductivity - s.latent().conductivity) / (target.conductivity - start);
  EXPECT_NEAR(gap, std::exp(-1.0), 2e-3);
  std::mt19937_64 rng(1);
  const auto f = s.observe(10.0, 3.0, rng);
  EXPECT_DOUBLE_EQ(f.conductivity, s.latent().conductivity);
  EXPECT_DOUBLE_EQ(f.level, 3.0);
}

TEST(PlantConfig, Geometry) {
  const auto pc = case_study::plant_config();
  EXPECT_NEAR(pc.cross_section(), M_PI * 2.25, 1e-12);
  EXPECT_NEAR(pc.level_limit(), 9.6, 1e-12);
  auto bad = pc;
  bad.dt = 0;
  EXPECT_THROW(bad.validate(), Error);
  bad = pc;
  bad.level_setpoint = 50;
  EXPECT_THROW(bad.validate(), Error);
}

TEST(Plant, RunsOneExperimentThroughAllPhases) {
  Plant plant(case_study::plant_config());
  std::ostringstream ev, sens;
  plant.set_event_log(&ev);
  plant.set_sensor_log(&sens);
  const auto id = plant.submit_experiment({kCenter, "250402", "F1"});
  EXPECT_EQ(id, 1u);
  EXPECT_TRUE(throws_code([&] { (void)plant.emit_fraction(id); }, Errc::wrong_phase));
  const auto events = plant.run_until_idle();
  EXPECT_TRUE(plant.idle());

  std::vector<Phase> started;
  for (const auto& e : events) {
    if (e.kind == EventKind::phase_started) started.push_back(e.phase);
  }
  EXPECT_EQ(started, (std::vector<Phase>{Phase::equilibrate, Phase::load, Phase::wash,
                                         Phase::elute, Phase::regenerate}));
  EXPECT_EQ(events.front().kind, EventKind::experiment_started);
  EXPECT_EQ(events.back().kind, EventKind::experiment_completed);

  const auto& tr = plant.trace(id);
  EXPECT_TRUE(tr.completed);
  EXPECT_TRUE(tr.equilibrate_stabilized);
  EXPECT_TRUE(tr.regenerate_stabilized);
  EXPECT_LE(tr.max_level_deviation, 0.5);
  EXPECT_EQ(tr.alarms, 0u);
  // Timed phases last exactly their recipe durations.
  EXPECT_NEAR(tr.end_time - tr.start_time - tr.equilibrate_duration - tr.regenerate_duration,
              assay::process_time(kCenter) * 3600.0, 2.0);

  const auto f = plant.emit_fraction(id);
  EXPECT_NO_THROW(f.validate());
  EXPECT_EQ(f.batch_id, "250402");

  std::istringstream lines(ev.str());
  std::string line;
  std::size_t n = 0;
  while (std::getline(lines, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j.at("event").get<std::string>(), to_string(events[n].kind));
    EXPECT_DOUBLE_EQ(j.at("t").get<double>(), events[n].time);
    ++n;
  }
  EXPECT_EQ(n, events.size());
  EXPECT_FALSE(sens.str().empty());
}

TEST(Plant, ValveLineupDuringElution) {
  Plant plant(case_study::plant_config());
  plant.submit_experiment({kCenter, "250402", "F1"});
  bool seen = false;
  while (!plant.idle() && !seen) {
    plant.step(10.0);
    const auto& s = plant.state();
    if (s.phase == Phase::elute) {
      seen = true;
      const ValveStates expect{false, false, false, true, false, false, true, false, true};
      EXPECT_EQ(s.valves, expect);
    }
    if (s.phase == Phase::load) {
      EXPECT_TRUE(s.valves[1]);
      EXPECT_TRUE(s.valves[5]);
      EXPECT_FALSE(s.valves[6]);
    }
  }
  EXPECT_TRUE(seen);
}

TEST(Plant, LevelRecoversFromDisturbance) {
  Plant plant(case_study::plant_config());
  plant.submit_experiment({kCenter, "250402", "F1"});
  plant.step(600.0);
  plant.set_level(5.0);
  plant.step(900.0);
  EXPECT_NEAR(plant.state().level, plant.config().level_setpoint, 0.5);
}

TEST(Plant, QueueingAndErrors) {
  auto pc = case_study::plant_config();
  Plant q(pc);
  EXPECT_TRUE(throws_code([&] { q.submit_experiment({kCenter, "nope", "F1"}); }, Errc::unknown_batch));
  EXPECT_EQ(q.submit_experiment({kCenter, "250402", "F1"}), 1u);
  EXPECT_EQ(q.submit_experiment({kCenter, "250403", "F1"}), 2u);
  q.run_until_idle();
  EXPECT_LT(q.trace(1).end_time, q.trace(2).start_time + 1e-9);
  EXPECT_THROW((void)q.trace(9), Error);

  pc.queueing = false;
  Plant single(pc);
  single.submit_experiment({kCenter, "250402", "F1"});
  single.step(5.0);
  EXPECT_TRUE(throws_code([&] { single.submit_experiment({kCenter, "250402", "F1"}); },
                          Errc::plant_busy));
}

TEST(Plant, SeededAndNoiselessBehaviour) {
  auto pc = case_study::plant_config();
  auto run = [&](const PlantConfig& cfg) {
    Plant p(cfg);
    const auto id = p.submit_experiment({kCenter, "250405", "F1"});
    p.run_until_idle();
    return p.emit_fraction(id);
  };
  EXPECT_EQ(run(pc), run(pc));
  auto other = pc;
  other.seed = 99;
  EXPECT_NE(run(pc).m_tt_total, run(other).m_tt_total);

  pc.noise = {0, 0, 0};
  const auto r = assay::responses_from_fraction(run(pc));
  const auto& z = pc.batch_table.at("250405");
  EXPECT_NEAR(r.tt_purity, rsm::predict(pc.truth.tt_purity, kCenter, z), 1e-9);
  EXPECT_NEAR(r.tt_productivity, rsm::predict(pc.truth.tt_productivity, kCenter, z), 1e-9);
  EXPECT_NEAR(r.fg_purity, rsm::predict(pc.truth.fg_purity, kCenter, z), 1e-9);
}

TEST(Plant, FlowSweepKeepsLevelInBand) {
  const auto pc = case_study::plant_config();
  for (double flow : {0.5, 1.5, 2.5, 3.5}) {
    Plant p(pc);
    const ProcessParams x{flow, 1, flow, 0.5, flow, 0.5};
    const auto id = p.submit_experiment({x, "250402", "F1"});
    p.run_until_idle();
    EXPECT_LE(p.trace(id).max_level_deviation, 0.5) << flow;
    EXPECT_EQ(p.trace(id).alarms, 0u);
  }
}

TEST(Phase, Names) {
  EXPECT_EQ(to_string(Phase::elute), "Elute");
  EXPECT_EQ(to_string(EventKind::fraction_ready), "FractionReady");
}
