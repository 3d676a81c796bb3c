#include "chromdev/case_study.hpp"

#include <algorithm>
#include <limits>

#include "chromdev/error.hpp"

namespace chromdev::case_study {

namespace {

using rsm::Term;

MaterialAttributes attrs(const char* id, double z1, double z2, double z3, double z4) {
  return {id, z1, z2, z3, z4};
}

rsm::RegressionModel model(const char* name, std::vector<Term> terms, std::vector<double> coefs,
                           double r2) {
  rsm::RegressionModel m;
  m.response_name = name;
  m.terms = std::move(terms);
  m.coefficients = std::move(coefs);
  m.p_values.assign(m.terms.size(), std::numeric_limits<double>::quiet_NaN());
  m.r_squared = r2;
  m.n_observations = 20;
  return m;
}

const Term I = Term::intercept();
const Term Z1 = Term::covariate(0);
const Term X1 = Term::main(0), X2 = Term::main(1), X3 = Term::main(2);
const Term X4 = Term::main(3), X5 = Term::main(4), X6 = Term::main(5);

}  // namespace

const std::vector<MaterialAttributes>& material_batches() {
  static const std::vector<MaterialAttributes> table{
      attrs("250401", 0.583, 1.01, 1.85, 3.21),  attrs("250402", 0.522, 0.926, 1.80, 3.19),
      attrs("250403", 0.559, 0.914, 1.88, 3.09), attrs("250404", 0.495, 0.966, 1.72, 3.36),
      attrs("250405", 0.530, 0.949, 2.01, 3.60), attrs("250406", 0.602, 1.10, 1.96, 3.59),
      attrs("250407", 0.570, 0.948, 1.85, 3.07), attrs("250408", 0.520, 0.920, 1.72, 3.04),
      attrs("250409", 0.568, 0.894, 1.80, 2.83), attrs("250501", 0.502, 0.874, 1.69, 2.94),
      attrs("231102", 0.484, 0.944, 1.57, 3.06), attrs("231201", 0.591, 1.14, 1.81, 3.50),
      attrs("231202", 0.641, 1.16, 1.96, 3.55),
  };
  return table;
}

const MaterialAttributes& batch(std::string_view id) {
  const auto& t = material_batches();
  const auto it = std::find_if(t.begin(), t.end(), [&](const auto& b) { return b.batch_id == id; });
  if (it == t.end()) throw Error(Errc::unknown_batch, "unknown batch '" + std::string(id) + "'");
  return *it;
}

const std::vector<DesignRun>& screening_runs() {
  static const std::vector<DesignRun> runs{
      {{1.0, 2.0, 2.5, 1.5, 3.5, 1.5}, "250408", {7.18, 39.3, 45.0, 247}},
      {{1.0, 1.0, 1.5, 0.5, 2.5, 0.5}, "250403", {1.14, 31.5, 6.65, 184}},
      {{1.5, 1.5, 1.5, 0.5, 3.5, 0.5}, "231102", {2.80, 111, 9.71, 384}},
      {{0.5, 1.5, 2.5, 1.5, 2.5, 1.5}, "231202", {7.58, 23.3, 30.3, 93.0}},
      {{1.5, 2.0, 2.0, 0.5, 2.5, 1.5}, "250405", {4.46, 102, 17.1, 391}},
      {{0.5, 1.0, 2.0, 1.5, 3.5, 0.5}, "250405", {6.87, 16.0, 31.5, 73.1}},
      {{1.5, 2.0, 2.5, 1.0, 2.5, 0.5}, "250404", {6.46, 57.4, 27.8, 247}},
      {{0.5, 1.0, 1.5, 1.0, 3.5, 1.5}, "250402", {4.47, 16.4, 21.6, 79.2}},
      {{1.5, 1.0, 2.5, 1.5, 3.0, 0.5}, "250408", {8.70, 51.1, 36.9, 217}},
      {{0.5, 2.0, 1.5, 0.5, 3.0, 1.5}, "250406", {1.79, 29.7, 8.14, 134}},
      {{1.5, 2.0, 1.5, 1.5, 3.5, 1.0}, "250402", {8.16, 90.7, 32.2, 358}},
      {{0.5, 1.0, 2.5, 0.5, 2.5, 1.0}, "250407", {3.62, 23.4, 14.4, 93.4}},
      {{1.5, 1.0, 2.5, 0.5, 3.5, 1.5}, "250406", {4.59, 59.9, 20.8, 271}},
      {{0.5, 2.0, 1.5, 1.5, 2.5, 0.5}, "231202", {4.62, 18.8, 21.8, 89.0}},
      {{1.5, 1.0, 1.5, 1.5, 2.5, 1.5}, "250501", {7.31, 49.9, 29.7, 203}},
      {{0.5, 2.0, 2.5, 0.5, 3.5, 0.5}, "250403", {4.20, 38.4, 17.8, 162}},
      {{1.0, 1.5, 2.0, 1.0, 3.0, 1.0}, "250407", {6.48, 56.7, 25.8, 226}},
      {{1.0, 1.5, 2.0, 1.0, 3.0, 1.0}, "250501", {7.06, 57.4, 28.4, 231}},
      {{1.0, 1.5, 2.0, 1.0, 3.0, 1.0}, "250404", {7.41, 54.4, 29.2, 214}},
      {{1.0, 1.5, 2.0, 1.0, 3.0, 1.0}, "231102", {6.97, 65.9, 24.3, 230}},
  };
  return runs;
}

std::vector<std::string> screening_batches() {
  std::vector<std::string> out;
  for (const auto& r : screening_runs()) {
    if (std::find(out.begin(), out.end(), r.batch_id) == out.end()) out.push_back(r.batch_id);
  }
  return out;
}

std::vector<rsm::Term> published_terms(ResponseId id) {
  switch (id) {
    case ResponseId::tt_purity: return {Z1, X1, X3, X4};
    case ResponseId::fg_purity: return {Z1, X3, X4, X5, X6};
    case ResponseId::tt_productivity:
    case ResponseId::fg_productivity:
      return {X1, X2, X4, X5, Term::interaction(0, 4), Term::interaction(0, 3),
              Term::interaction(0, 1)};
  }
  return {};
}

rsm::RegressionModel published_model(ResponseId id) {
  const Term X1X5 = Term::interaction(0, 4), X1X4 = Term::interaction(0, 3);
  const Term X1X2 = Term::interaction(0, 1);
  switch (id) {
    case ResponseId::tt_purity:
      return model("Y1", {I, X1, X3, X4, Z1}, {3.1167, 0.7026, 1.8364, 3.9301, -10.7425}, 0.8538);
    case ResponseId::tt_productivity:
      return model("Y2", {I, X1, X2, X4, X5, X1X2, X1X4, X1X5},
                   {32.8842, -23.4526, -2.3691, -5.7581, -8.2481, 20.6692, -9.4687, 17.5758},
                   0.8377);
    case ResponseId::fg_purity:
      return model("Y3", {I, X3, X4, X5, X6, Z1},
                   {0.4002, 9.5709, 18.7848, 2.9674, 3.8743, -50.0259}, 0.9574);
    case ResponseId::fg_productivity:
      return model("Y4", {I, X1, X2, X4, X5, X1X2, X1X4, X1X5},
                   {47.4225, -18.6213, 13.6240, -22.3586, -10.5198, 58.9702, -26.3807, 49.6461},
                   0.9322);
  }
  throw Error(Errc::invalid_argument, "unknown response");
}

dspace::ModelSet published_models() {
  return {published_model(ResponseId::tt_purity), published_model(ResponseId::tt_productivity),
          published_model(ResponseId::fg_purity), published_model(ResponseId::fg_productivity)};
}

std::array<double, kResponseCount> published_r_squared() {
  return {0.8538, 0.8377, 0.9574, 0.9322};
}

plant::TruthModels truth_models() {
  return {published_model(ResponseId::tt_purity), published_model(ResponseId::tt_productivity),
          published_model(ResponseId::fg_purity)};
}

plant::PlantConfig plant_config() {
  plant::PlantConfig c;
  for (const auto& b : material_batches()) c.batch_table.emplace(b.batch_id, b);
  c.truth = truth_models();
  return c;
}

const std::vector<ParetoReference>& pareto_references() {
  constexpr double za = kZ1Batch250401Prompt;
  constexpr double zb = 0.568;
  // Y order in `reported` follows ResponseVector: Y1, Y2, Y3, Y4.
  static const std::vector<ParetoReference> refs{
      {"250401", 1, za, {1.5, 2.0, 2.5, 1.095, 3.5, 0.86}, {6.80, 96.5, 29.4, 380}},
      {"250401", 2, za, {1.5, 2.0, 2.5, 1.33, 3.5, 0.501}, {7.74, 91.7, 32.5, 365}},
      {"250401", 3, za, {1.5, 2.0, 2.5, 1.29, 3.5, 1.23}, {7.58, 92.6, 34.6, 367}},
      {"250401", 4, za, {1.5, 2.0, 2.5, 0.892, 3.5, 0.515}, {6.00, 101, 24.3, 392}},
      {"250401", 5, za, {1.5, 2.0, 2.5, 1.40, 3.5, 1.33}, {7.99, 90.4, 36.9, 361}},
      {"250409", 1, zb, {1.5, 2.0, 2.5, 1.50, 3.5, 1.50}, {8.56, 88.4, 40.3, 355}},
      {"250409", 2, zb, {1.5, 2.0, 2.5, 1.31, 3.5, 1.50}, {7.83, 92.2, 36.8, 366}},
      {"250409", 3, zb, {1.5, 2.0, 2.5, 1.49, 3.5, 0.815}, {8.52, 88.6, 37.5, 355}},
      {"250409", 4, zb, {1.5, 2.0, 2.5, 1.45, 3.5, 0.501}, {8.38, 89.4, 35.6, 357}},
      {"250409", 5, zb, {1.5, 2.0, 2.5, 1.10, 3.5, 1.50}, {6.99, 96.4, 32.8, 379}},
  };
  return refs;
}

const std::vector<ValidationPoint>& validation_points() {
  static const std::vector<ValidationPoint> pts{
      {"250401", {1.5, 2.0, 2.5, 1.095, 3.5, 0.86}, true},
      {"250409", {1.5, 2.0, 2.5, 1.49, 3.5, 0.81}, true},
      {"231201", {0.75, 1.0, 1.75, 0.5, 3.25, 0.5}, false},
  };
  return pts;
}

const std::vector<MeasuredValidation>& measured_validations() {
  static const std::vector<MeasuredValidation> rows{
      {"250401", {6.80, 96.5, 29.4, 380}, {7.81, 98.0, 32.8, 412}},
      {"250409", {8.52, 88.6, 37.5, 355}, {8.28, 89.2, 33.8, 364}},
  };
  return rows;
}

pareto::ParamBounds optimization_bounds() { return pareto::default_bounds(); }

pareto::OptimizationSpec optimization_spec(const dspace::ModelSet& models,
                                           const MaterialAttributes& attrs) {
  pareto::OptimizationSpec spec;
  spec.objectives.assign(models.begin(), models.end());
  spec.constraints = {{models[0], 6.0}, {models[2], 24.0}};
  spec.bounds = optimization_bounds();
  spec.attrs = attrs;
  return spec;
}

}  // namespace chromdev::case_study
