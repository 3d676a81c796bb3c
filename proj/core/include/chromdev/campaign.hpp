#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chromdev/doe.hpp"
#include "chromdev/dspace.hpp"
#include "chromdev/pareto.hpp"
#include "chromdev/plant.hpp"
#include "chromdev/record_store.hpp"
#include "chromdev/rsm.hpp"

namespace chromdev::campaign {

enum class DesignChoice { dsd, bbd, ccd };

std::string_view to_string(DesignChoice d) noexcept;
DesignChoice parse_design_choice(std::string_view text);

struct ValidationTarget {
  std::string batch_id;
  ProcessParams params;
};

struct CampaignConfig {
  /// Starting recipe; the experimental region is centred on it.
  ProcessParams initial_values{1.0, 1.5, 2.0, 1.0, 3.0, 1.0};
  std::array<double, kProcessParamCount> half_ranges{0.5, 0.5, 0.5, 0.5, 0.5, 0.5};

  DesignChoice design = DesignChoice::dsd;
  std::size_t n_dummy = 2;
  /// DSD: centre rows beyond the first. BBD/CCD: number of centre rows.
  std::size_t n_center = 3;
  doe::AlphaMode alpha = doe::AlphaMode::face_centered;
  std::uint64_t design_seed = 7;
  bool shuffle_run_order = false;

  /// Batches feeding the designed runs.
  std::vector<std::string> optimization_batches;
  /// Explicit batch per design row; empty means seeded balanced allocation.
  std::vector<std::string> batch_assignment;
  /// Held-out batches whose attributes drive the Pareto search.
  std::vector<std::string> pareto_batches;
  /// Points run on the plant after modelling.
  std::vector<ValidationTarget> validation_points;

  rsm::StepwiseOptions stepwise{0.05, 0.05, rsm::Heredity::weak, 2};
  pareto::NsgaConfig nsga{2000, 100, 1};
  std::size_t pareto_keep = 5;
  /// Lower bounds imposed during the Pareto search.
  dspace::ThresholdSpec constraints{{6.0, std::nullopt, 24.0, std::nullopt}};
  /// Lower bounds defining the design space.
  dspace::ThresholdSpec thresholds = dspace::default_thresholds();
  std::size_t grid_resolution = 41;
  std::size_t sweep_x = 2;  // zero-based factor swept on the grid x axis
  std::size_t sweep_y = 3;

  std::filesystem::path output_dir;

  [[nodiscard]] std::vector<doe::FactorSpec> factors() const;

  /// Throws InvalidArgument on inconsistent settings, including validation
  /// batches that also appear among the optimization batches.
  void validate() const;
};

/// Case-study settings: DSD with two dummy factors and four centre runs over
/// ten batches, Pareto search for 250401 and 250409, validation at the three
/// published points.
CampaignConfig case_study_config();

struct ModelFit {
  rsm::RegressionModel model;
  rsm::DiagnosticsReport diagnostics;
};

using ModelFits = std::array<ModelFit, kResponseCount>;

struct BatchFront {
  std::string batch_id;
  pareto::ParetoFront front;     // full deduplicated first front
  pareto::ParetoFront selected;  // diverse subset of pareto_keep points
  bool feasible = true;
};

struct ValidationRow {
  std::string batch_id;
  ProcessParams params;
  ResponseVector predicted;
  ResponseVector simulated;
  dspace::Membership membership;
  ExperimentRecord record;
};

struct DesignSpaceResult {
  std::string batch_id;
  std::string file_name;
  dspace::GridSpec grid;
  dspace::DesignSpaceGrid result;
};

struct CampaignReport {
  doe::DesignTable design;
  std::vector<ExperimentRecord> records;
  ModelFits models;
  std::vector<BatchFront> fronts;
  std::vector<DesignSpaceResult> design_spaces;
  std::vector<ValidationRow> validations;
  std::vector<std::string> warnings;
};

doe::DesignTable build_design(const CampaignConfig& config);

/// Runs every design row once, in table order, and stores one record per row.
/// Assay failures mark the record failed and the campaign continues.
std::vector<ExperimentRecord> execute_design(plant::Plant& plant, const doe::DesignTable& design,
                                             RecordStore& store);

/// Observations of one response from every done record.
rsm::Dataset dataset_from_records(const std::vector<ExperimentRecord>& records, ResponseId id,
                                  const std::map<std::string, MaterialAttributes>& batch_table);

/// Stepwise selection over the full second-order candidate pool with
/// covariates, then least squares on the selected terms.
ModelFits fit_models(const std::vector<ExperimentRecord>& records,
                     const std::map<std::string, MaterialAttributes>& batch_table,
                     const rsm::StepwiseOptions& options);

dspace::ModelSet model_set(const ModelFits& fits);

/// Runs one plant experiment at the point and compares it with the models.
ValidationRow validate_solution(plant::Plant& plant, const std::string& batch_id,
                                const ProcessParams& params, const dspace::ModelSet& models,
                                const dspace::ThresholdSpec& thresholds);

/// Full loop: design, execution, fitting, Pareto search, design space and
/// validation. Writes every artifact when config.output_dir is set.
CampaignReport run_campaign(const CampaignConfig& config, const plant::PlantConfig& plant_config);

void write_report_markdown(std::ostream& out, const CampaignConfig& config,
                           const CampaignReport& report);

}  // namespace chromdev::campaign
