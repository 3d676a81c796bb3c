#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>
#include <gtest/gtest.h>

#include "chromdev/config_io.hpp"
#include "test_util.hpp"

using namespace chromdev;
using namespace chromdev::config;

TEST(Config, DumpParseRoundTrip) {
  const auto def = default_run_config();
  const auto text = dump_run_config(def);
  const auto back = parse_run_config(text);
  EXPECT_EQ(dump_run_config(back), text);
  EXPECT_EQ(back.campaign.optimization_batches, def.campaign.optimization_batches);
  EXPECT_EQ(back.plant.batch_table, def.plant.batch_table);
}

TEST(Config, OverridesAndDefaults) {
  const auto rc = parse_run_config(R"({"schema_version": 1,
    "campaign": {"nsga": {"population": 50, "generations": 7, "seed": 4},
                 "constraints": {"Y1": 7.5}, "sweep": ["X1", "X6"]},
    "plant": {"seed": 12, "noise": {"Y1": 0, "Y2": 0, "Y3": 0}}})");
  EXPECT_EQ(rc.campaign.nsga.population, 50u);
  EXPECT_EQ(rc.campaign.nsga.generations, 7u);
  EXPECT_EQ(rc.campaign.constraints.lower[0], 7.5);
  EXPECT_FALSE(rc.campaign.constraints.lower[2].has_value());
  EXPECT_EQ(rc.campaign.sweep_x, 0u);
  EXPECT_EQ(rc.campaign.sweep_y, 5u);
  EXPECT_EQ(rc.plant.seed, 12u);
  EXPECT_EQ(rc.plant.noise.tt_purity, 0.0);
  EXPECT_EQ(rc.campaign.grid_resolution, default_run_config().campaign.grid_resolution);
}

TEST(Config, Rejections) {
  EXPECT_TRUE(throws_code([] { parse_run_config(R"({"schema_version": 2})"); }, Errc::parse_error));
  EXPECT_TRUE(throws_code([] { parse_run_config(R"({"schema_version": 1, "colour": 1})"); },
                          Errc::parse_error));
  EXPECT_TRUE(throws_code(
      [] { parse_run_config(R"({"schema_version": 1, "campaign": {"nsga": {"pop": 4}}})"); },
      Errc::parse_error));
  EXPECT_TRUE(throws_code([] { parse_run_config("[1, 2"); }, Errc::parse_error));
  EXPECT_THROW(parse_run_config(R"({"schema_version": 1, "campaign": {"design": "xyz"}})"), Error);
  EXPECT_THROW(load_run_config("/nonexistent/cfg.json"), Error);
}

TEST(Config, LoadFromFile) {
  const auto dir = std::filesystem::temp_directory_path() / "chromdev_test_cfg";
  std::filesystem::create_directories(dir);
  const auto path = dir / "c.json";
  std::ofstream(path) << R"({"schema_version": 1, "campaign": {"output_dir": "out"}})";
  const auto rc = load_run_config(path);
  // Output paths stay relative to the working directory.
  EXPECT_EQ(rc.campaign.output_dir, "out");
}
