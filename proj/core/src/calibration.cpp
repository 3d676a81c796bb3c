#include "chromdev/calibration.hpp"

#include <random>
#include <vector>

#include "chromdev/case_study.hpp"
#include "chromdev/rsm.hpp"

namespace chromdev::calibration {

namespace {

struct Replicates {
  std::vector<std::vector<std::array<double, 3>>> deviates;  // [replicate][run]
};

Replicates draw(const CalibrationOptions& options, std::size_t runs) {
  Replicates r;
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> z(0.0, 1.0);
  r.deviates.resize(options.replicates);
  for (auto& rep : r.deviates) {
    rep.resize(runs);
    for (auto& d : rep)
      for (double& v : d) v = z(rng);
  }
  return r;
}

std::array<double, kResponseCount> mean_r2(const plant::FractionNoise& noise,
                                           const Replicates& reps) {
  const auto& runs = case_study::screening_runs();
  const auto truth = case_study::truth_models();
  const double bed_volume = plant::PlantConfig{}.bed_volume();
  std::array<std::vector<rsm::Term>, kResponseCount> terms;
  for (auto id : kAllResponses) {
    terms[index_of(id)] = case_study::published_terms(id);
    terms[index_of(id)].insert(terms[index_of(id)].begin(), rsm::Term::intercept());
  }

  std::array<double, kResponseCount> sum{};
  for (const auto& rep : reps.deviates) {
    std::array<rsm::Dataset, kResponseCount> data;
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const auto& attrs = case_study::batch(runs[i].batch_id);
      const auto f = plant::synthesize_fraction(truth, noise, runs[i].params, attrs, bed_volume,
                                                rep[i]);
      const auto y = assay::responses_from_fraction(f);
      for (auto id : kAllResponses) data[index_of(id)].rows.push_back({runs[i].params, attrs, y[id]});
    }
    for (std::size_t k = 0; k < kResponseCount; ++k) {
      sum[k] += rsm::fit_least_squares(data[k], terms[k]).r_squared;
    }
  }
  for (double& s : sum) s /= static_cast<double>(reps.deviates.size());
  return sum;
}

}  // namespace

std::array<double, kResponseCount> expected_r_squared(const plant::FractionNoise& noise,
                                                      const CalibrationOptions& options) {
  return mean_r2(noise, draw(options, case_study::screening_runs().size()));
}

CalibrationResult calibrate_noise(const CalibrationOptions& options) {
  const auto reps = draw(options, case_study::screening_runs().size());
  const auto target = case_study::published_r_squared();
  CalibrationResult result;
  result.target = target;

  // Each purity/productivity latent only affects its own indicator, so the
  // three levels are bisected independently; the others stay at zero.
  const std::array<std::pair<double plant::FractionNoise::*, std::size_t>, 3> knobs{{
      {&plant::FractionNoise::tt_purity, 0},
      {&plant::FractionNoise::tt_productivity, 1},
      {&plant::FractionNoise::fg_purity, 2},
  }};
  for (const auto& [member, k] : knobs) {
    double lo = 0.0, hi = 1.0;
    while (hi - lo > options.tolerance) {
      const double mid = 0.5 * (lo + hi);
      plant::FractionNoise trial{0.0, 0.0, 0.0};
      trial.*member = mid;
      (mean_r2(trial, reps)[k] > target[k] ? lo : hi) = mid;
    }
    result.noise.*member = 0.5 * (lo + hi);
  }
  result.mean_r_squared = mean_r2(result.noise, reps);
  return result;
}

}  // namespace chromdev::calibration
