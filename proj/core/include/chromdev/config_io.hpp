#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "chromdev/campaign.hpp"
#include "chromdev/plant.hpp"

namespace chromdev::config {

inline constexpr int kSchemaVersion = 1;

struct RunConfig {
  campaign::CampaignConfig campaign;
  plant::PlantConfig plant;
};

/// Case-study campaign on the case-study plant.
RunConfig default_run_config();

/// Parses a JSON document `{"schema_version": 1, "campaign": {...},
/// "plant": {...}}`. Keys that are present override default_run_config();
/// unknown keys and schema mismatches throw ParseError.
RunConfig parse_run_config(std::string_view json_text,
                           const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

/// Full document for a configuration, loadable by parse_run_config.
std::string dump_run_config(const RunConfig& config);

}  // namespace chromdev::config
