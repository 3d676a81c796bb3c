#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace chromdev::cli {

struct DoeArgs {
  std::string design = "dsd";
  std::size_t factors = 6;
  std::size_t dummy = 0;
  std::size_t centers = 0;
  std::string alpha = "face_centered";
  std::uint64_t seed = 0;
  bool shuffle = false;
  std::vector<std::string> batches;
  std::string out;
};

struct RunArgs {
  std::string design;
  std::string config;
  std::string out;
  std::string events;
  std::string sensors;
  std::vector<std::string> batches;
  std::uint64_t seed = 0;
};

struct FitArgs {
  std::string records;
  std::string config;
  std::string out_dir;
  double p_enter = 0.05;
  double p_remove = 0.05;
  std::string heredity = "weak";
};

struct OptimizeArgs {
  std::string models;
  std::string config;
  std::string batch;
  std::optional<std::size_t> population;
  std::optional<std::size_t> generations;
  std::optional<std::uint64_t> seed;
  std::size_t keep = 0;
  std::string out;
};

struct DspaceArgs {
  std::string models;
  std::string config;
  std::string batch;
  std::vector<double> point;
  std::vector<std::string> sweep{"X3", "X4"};
  std::size_t resolution = 41;
  std::string out;
};

struct ValidateArgs {
  std::string models;
  std::string config;
  std::string batch;
  std::vector<double> point;
};

struct CampaignArgs {
  std::string config;
  std::string out;
};

struct ReplicateArgs {
  std::string scratch;
  bool keep = false;
};

int run_doe(const DoeArgs& a);
int run_run(const RunArgs& a);
int run_fit(const FitArgs& a);
int run_optimize(const OptimizeArgs& a);
int run_dspace(const DspaceArgs& a);
int run_validate(const ValidateArgs& a);
int run_campaign_cmd(const CampaignArgs& a);
int run_replicate(const ReplicateArgs& a);
int run_default_config(const std::string& out);

}  // namespace chromdev::cli
