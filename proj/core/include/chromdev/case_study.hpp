#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "chromdev/dspace.hpp"
#include "chromdev/pareto.hpp"
#include "chromdev/plant.hpp"
#include "chromdev/process.hpp"
#include "chromdev/rsm.hpp"

/// Reference data of the Ginkgo biloba leaf extract (EGBL) resin
/// purification case study, embedded so checks run without external files.
namespace chromdev::case_study {

/// Feed-batch attributes for all thirteen characterised batches.
const std::vector<MaterialAttributes>& material_batches();

/// Throws UnknownBatch for ids outside material_batches().
const MaterialAttributes& batch(std::string_view id);

/// TT concentration of batch 250401 as used in the optimisation prompt; the
/// batch table lists the rounded 0.583.
inline constexpr double kZ1Batch250401Prompt = 0.5835;

struct DesignRun {
  ProcessParams params;
  std::string batch_id;
  ResponseVector measured;
};

/// The 20-run screening campaign with measured responses.
const std::vector<DesignRun>& screening_runs();

/// Batches that fed the screening campaign, in first-use order.
std::vector<std::string> screening_batches();

/// Published response-surface model (coefficients and R^2; no p-values).
rsm::RegressionModel published_model(ResponseId id);
dspace::ModelSet published_models();

/// Published R^2 per response.
std::array<double, kResponseCount> published_r_squared();

/// Latent plant surfaces taken from the published Y1, Y2 and Y3 models.
plant::TruthModels truth_models();

/// Plant configured with the case-study geometry, batch table and truth.
plant::PlantConfig plant_config();

struct ParetoReference {
  std::string batch_id;
  int solution = 0;
  double z1 = 0.0;
  ProcessParams params;
  ResponseVector reported;
};

/// Five published Pareto-optimal solutions for each of 250401 and 250409.
const std::vector<ParetoReference>& pareto_references();

struct ValidationPoint {
  std::string batch_id;
  ProcessParams params;
  bool inside = false;
};

/// Points chosen for experimental validation with their reported position.
const std::vector<ValidationPoint>& validation_points();

struct MeasuredValidation {
  std::string batch_id;
  ResponseVector predicted;
  ResponseVector measured;
};

const std::vector<MeasuredValidation>& measured_validations();

/// Search box of the optimisation.
pareto::ParamBounds optimization_bounds();

/// Maximise Y1..Y4 subject to Y1 >= 6 and Y3 >= 24.
pareto::OptimizationSpec optimization_spec(const dspace::ModelSet& models,
                                           const MaterialAttributes& attrs);

/// Published term set of each response (without the intercept).
std::vector<rsm::Term> published_terms(ResponseId id);

}  // namespace chromdev::case_study
