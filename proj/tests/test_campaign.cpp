#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "chromdev/campaign.hpp"
#include "chromdev/case_study.hpp"
#include "chromdev/record_store.hpp"
#include "test_util.hpp"

using namespace chromdev;
using namespace chromdev::campaign;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("chromdev_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

ExperimentRecord done_record(std::uint64_t id) {
  ExperimentRecord r;
  r.experiment_id = id;
  r.design_row = static_cast<std::size_t>(id);
  r.spec = {{1, 1.5, 2, 1, 3, 1}, "250402", "F1"};
  r.start_time = 10.0 * id;
  r.end_time = 10.0 * id + 5;
  r.status = RunStatus::done;
  r.fraction = assay::FractionRecord{12.5, 30.25, 200.0, 254.0, 3.5, "250402", r.spec.params};
  r.responses = assay::responses_from_fraction(*r.fraction);
  return r;
}

}  // namespace

TEST(Record, JsonRoundTrip) {
  const auto r = done_record(3);
  const auto back = record_from_json(record_to_json(r));
  EXPECT_EQ(back.experiment_id, 3u);
  EXPECT_EQ(back.spec.params, r.spec.params);
  EXPECT_EQ(back.status, RunStatus::done);
  EXPECT_EQ(back.fraction, r.fraction);
  EXPECT_EQ(back.responses, r.responses);

  ExperimentRecord failed;
  failed.experiment_id = 4;
  failed.status = RunStatus::failed;
  failed.error = "ZeroSolids: total solids are zero";
  failed.spec = {{1, 1, 1, 1, 1, 1}, "250402", "F1"};
  const auto fb = record_from_json(record_to_json(failed));
  EXPECT_FALSE(fb.fraction.has_value());
  EXPECT_EQ(fb.error, failed.error);
  EXPECT_THROW(record_from_json("{not json"), Error);
}

TEST(Record, Validation) {
  auto r = done_record(1);
  EXPECT_NO_THROW(r.validate());
  r.responses->tt_purity += 1.0;
  EXPECT_THROW(r.validate(), Error);
  auto missing = done_record(1);
  missing.fraction.reset();
  EXPECT_THROW(missing.validate(), Error);
}

TEST(RecordStore, AppendReloadAndDuplicates) {
  const auto dir = scratch("store");
  const auto path = dir / "records.jsonl";
  {
    RecordStore s(path);
    s.append(done_record(1));
    append_record(s, done_record(2));
    EXPECT_TRUE(throws_code([&] { s.append(done_record(2)); }, Errc::duplicate_id));
  }
  RecordStore again(path);
  ASSERT_EQ(again.records().size(), 2u);
  EXPECT_TRUE(throws_code([&] { again.append(done_record(1)); }, Errc::duplicate_id));
  EXPECT_EQ(load_records(path).size(), 2u);

  RecordStore memory;
  memory.append(done_record(1));
  EXPECT_EQ(memory.records().size(), 1u);
  RecordStore broken(dir / "missing_dir" / "r.jsonl");
  EXPECT_TRUE(throws_code([&] { broken.append(done_record(1)); }, Errc::storage_failure));
}

TEST(CampaignConfig, ReplicaSettings) {
  const auto c = case_study_config();
  EXPECT_NO_THROW(c.validate());
  const auto d = build_design(c);
  ASSERT_EQ(d.rows.size(), 20u);
  const auto& runs = case_study::screening_runs();
  for (std::size_t r = 0; r < 20; ++r) EXPECT_EQ(d.rows[r].batch_id.value(), runs[r].batch_id);

  auto overlap = c;
  overlap.pareto_batches.push_back(overlap.optimization_batches.front());
  EXPECT_THROW(overlap.validate(), Error);
  auto badsweep = c;
  badsweep.sweep_y = badsweep.sweep_x;
  EXPECT_THROW(badsweep.validate(), Error);
  EXPECT_EQ(parse_design_choice("bbd"), DesignChoice::bbd);
  EXPECT_THROW(parse_design_choice("plackett"), Error);
}

TEST(CampaignConfig, FactorsFollowInitialValues) {
  CampaignConfig c;
  c.initial_values = {2, 2, 2, 2, 2, 2};
  c.half_ranges = {1, 0.5, 0.5, 0.5, 0.5, 0.5};
  const auto f = c.factors();
  EXPECT_DOUBLE_EQ(f[0].low, 1.0);
  EXPECT_DOUBLE_EQ(f[0].high, 3.0);
  EXPECT_DOUBLE_EQ(f[5].high, 2.5);
}

TEST(Campaign, ExecuteAndFitSmallDesign) {
  auto c = case_study_config();
  auto pc = case_study::plant_config();
  const auto design = build_design(c);
  plant::Plant plant(pc);
  RecordStore store;
  const auto records = execute_design(plant, design, store);
  ASSERT_EQ(records.size(), 20u);
  for (const auto& r : records) EXPECT_EQ(r.status, RunStatus::done);
  EXPECT_EQ(store.records().size(), 20u);

  const auto ds = dataset_from_records(records, ResponseId::fg_purity, pc.batch_table);
  EXPECT_EQ(ds.rows.size(), 20u);
  EXPECT_EQ(ds.response_name, "Y3");
  const auto fits = fit_models(records, pc.batch_table, c.stepwise);
  for (const auto& f : fits) {
    EXPECT_EQ(f.model.n_observations, 20u);
    EXPECT_GT(f.diagnostics.r_squared, 0.3);
  }
  const auto models = model_set(fits);
  const auto v = validate_solution(plant, "250401", {1.2, 1.5, 2, 1, 3, 1}, models,
                                   dspace::default_thresholds());
  EXPECT_EQ(v.record.status, RunStatus::done);
  EXPECT_NEAR(v.predicted.tt_purity,
              rsm::predict(models[0], v.params, pc.batch_table.at("250401")), 1e-12);
}

TEST(Campaign, FullLoopWritesArtifacts) {
  auto c = case_study_config();
  c.nsga = {40, 10, 3};
  c.grid_resolution = 9;
  c.output_dir = scratch("campaign");
  auto pc = case_study::plant_config();
  const auto report = run_campaign(c, pc);
  EXPECT_EQ(report.fronts.size(), c.pareto_batches.size());
  EXPECT_EQ(report.validations.size(), c.validation_points.size());
  // Design runs followed by one record per validation run.
  EXPECT_EQ(report.records.size(), 20u + c.validation_points.size());
  for (const char* f : {"design.csv", "records.jsonl", "events.jsonl", "sensors.jsonl",
                        "pareto.csv", "report.md", "models/Y1.txt", "models/Y4.txt"}) {
    EXPECT_TRUE(fs::exists(c.output_dir / f)) << f;
  }
  std::ifstream pareto(c.output_dir / "pareto.csv");
  std::string header;
  std::getline(pareto, header);
  EXPECT_EQ(header, "batch,X1,X2,X3,X4,X5,X6,Y1,Y2,Y3,Y4,feasible");
  std::ostringstream md;
  write_report_markdown(md, c, report);
  EXPECT_NE(md.str().find("Y1"), std::string::npos);
}
