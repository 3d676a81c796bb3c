#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <fmt/format.h>

#include "acceptance.hpp"
#include "chromdev/campaign.hpp"
#include "chromdev/config_io.hpp"
#include "chromdev/doe.hpp"
#include "chromdev/dspace.hpp"
#include "chromdev/error.hpp"
#include "chromdev/pareto.hpp"
#include "chromdev/record_store.hpp"
#include "chromdev/rsm.hpp"

namespace chromdev::cli {

namespace fs = std::filesystem;

namespace {

config::RunConfig load_config(const std::string& path) {
  return path.empty() ? config::default_run_config() : config::load_run_config(path);
}

// Writes to `path`, or stdout when it is empty or "-".
void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  if (!out) throw Error(Errc::storage_failure, "cannot write " + path);
}

dspace::ModelSet load_models(const std::string& dir) {
  dspace::ModelSet models;
  for (auto id : kAllResponses) {
    const fs::path p = fs::path(dir) / (std::string(response_symbol(id)) + ".txt");
    std::ifstream in(p);
    if (!in) throw Error(Errc::parse_error, "cannot open model " + p.string());
    models[index_of(id)] = rsm::read_model_text(in);
  }
  return models;
}

const MaterialAttributes& batch_attrs(const plant::PlantConfig& pc, const std::string& id) {
  const auto it = pc.batch_table.find(id);
  if (it == pc.batch_table.end()) throw Error(Errc::unknown_batch, "batch '" + id + "' is not in the batch table");
  return it->second;
}

ProcessParams point_from(const std::vector<double>& v) {
  if (v.size() != kProcessParamCount) {
    throw Error(Errc::invalid_argument, "--point needs six comma-separated values");
  }
  ProcessParams p;
  for (std::size_t i = 0; i < kProcessParamCount; ++i) p[i] = v[i];
  p.validate();
  return p;
}

std::size_t factor_index(const std::string& s) {
  if (s.size() == 2 && s[0] == 'X' && s[1] >= '1' && s[1] <= '6') return static_cast<std::size_t>(s[1] - '1');
  throw Error(Errc::invalid_argument, "expected a factor symbol X1..X6, got '" + s + "'");
}

std::vector<doe::FactorSpec> generic_factors(std::size_t k) {
  if (k == kProcessParamCount) return doe::default_factors();
  std::vector<doe::FactorSpec> f;
  for (std::size_t j = 0; j < k; ++j) f.push_back({fmt::format("X{}", j + 1), -1.0, 1.0, ""});
  return f;
}

}  // namespace

int run_doe(const DoeArgs& a) {
  const auto factors = generic_factors(a.factors);
  doe::DesignTable design;
  const auto kind = campaign::parse_design_choice(a.design);
  if (kind == campaign::DesignChoice::dsd) {
    design = doe::generate_dsd(factors, {a.dummy, a.centers, a.seed, a.shuffle});
  } else {
    if (a.dummy != 0) throw Error(Errc::invalid_argument, "--dummy applies to dsd only");
    if (kind == campaign::DesignChoice::bbd) {
      design = doe::generate_bbd(factors, a.centers);
    } else {
      const auto mode = a.alpha == "rotatable" ? doe::AlphaMode::rotatable : doe::AlphaMode::face_centered;
      design = doe::generate_ccd(factors, mode, a.centers);
    }
    if (a.shuffle) design = doe::shuffle_run_order(design, a.seed);
  }
  if (!a.batches.empty()) design = doe::allocate_batches(design, a.batches, a.seed);
  std::ostringstream csv;
  doe::write_design_csv(csv, design);
  emit(a.out, csv.str());
  return 0;
}

int run_run(const RunArgs& a) {
  const auto rc = load_config(a.config);
  std::ifstream in(a.design);
  if (!in) throw Error(Errc::parse_error, "cannot open design " + a.design);
  auto design = doe::read_design_csv(in, rc.campaign.factors(), 0);
  if (!a.batches.empty()) design = doe::allocate_batches(design, a.batches, a.seed);

  std::error_code ec;
  fs::remove(a.out, ec);
  std::ofstream events, sensors;
  plant::Plant plant(rc.plant);
  if (!a.events.empty()) {
    events.open(a.events, std::ios::trunc);
    plant.set_event_log(&events);
  }
  if (!a.sensors.empty()) {
    sensors.open(a.sensors, std::ios::trunc);
    plant.set_sensor_log(&sensors);
  }
  campaign::RecordStore store(a.out);
  const auto records = campaign::execute_design(plant, design, store);
  std::size_t failed = 0;
  for (const auto& r : records) {
    if (r.status == campaign::RunStatus::failed) {
      ++failed;
      std::cerr << "run " << r.design_row << " failed: " << r.error << '\n';
    }
  }
  std::cout << fmt::format("{} runs recorded in {} ({} failed)\n", records.size(), a.out, failed);
  return 0;
}

int run_fit(const FitArgs& a) {
  const auto rc = load_config(a.config);
  const auto records = campaign::load_records(a.records);
  rsm::StepwiseOptions opt{a.p_enter, a.p_remove, rsm::parse_heredity(a.heredity), 2};
  const auto fits = campaign::fit_models(records, rc.plant.batch_table, opt);
  fs::create_directories(a.out_dir);
  for (auto id : kAllResponses) {
    const auto& f = fits[index_of(id)];
    std::ostringstream txt;
    rsm::write_model_text(txt, f.model);
    emit((fs::path(a.out_dir) / (std::string(response_symbol(id)) + ".txt")).string(), txt.str());
    std::vector<std::string> names;
    for (const auto& t : f.model.terms) names.push_back(t.symbol());
    std::cout << fmt::format("{} R2 {:.4f} n {} terms {}\n", response_symbol(id),
                             f.diagnostics.r_squared, f.model.n_observations,
                             fmt::join(names, " "));
  }
  return 0;
}

int run_optimize(const OptimizeArgs& a) {
  const auto rc = load_config(a.config);
  const auto models = load_models(a.models);
  pareto::OptimizationSpec spec;
  spec.objectives.assign(models.begin(), models.end());
  for (std::size_t r = 0; r < kResponseCount; ++r) {
    if (rc.campaign.constraints.lower[r]) spec.constraints.push_back({models[r], *rc.campaign.constraints.lower[r]});
  }
  const auto factors = rc.campaign.factors();
  for (std::size_t j = 0; j < kProcessParamCount; ++j) spec.bounds[j] = {factors[j].low, factors[j].high};
  spec.attrs = batch_attrs(rc.plant, a.batch);
  auto nsga = rc.campaign.nsga;
  if (a.population) nsga.population = *a.population;
  if (a.generations) nsga.generations = *a.generations;
  if (a.seed) nsga.seed = *a.seed;
  auto front = pareto::optimize(spec, nsga);
  if (a.keep > 0) front = pareto::select_diverse(front, a.keep);
  std::ostringstream csv;
  pareto::write_front_csv(csv, front);
  emit(a.out, csv.str());
  return 0;
}

int run_dspace(const DspaceArgs& a) {
  const auto rc = load_config(a.config);
  const auto models = load_models(a.models);
  if (a.sweep.size() != 2) throw Error(Errc::invalid_argument, "--sweep needs two factors");
  const auto factors = rc.campaign.factors();
  dspace::GridSpec g;
  const auto ix = factor_index(a.sweep[0]), iy = factor_index(a.sweep[1]);
  g.x = {ix, factors[ix].low, factors[ix].high, a.resolution};
  g.y = {iy, factors[iy].low, factors[iy].high, a.resolution};
  g.fixed = point_from(a.point);
  g.attrs = batch_attrs(rc.plant, a.batch);
  const auto grid = dspace::grid_scan(models, g, rc.campaign.thresholds);
  std::ostringstream csv;
  dspace::write_grid_csv(csv, grid);
  emit(a.out, csv.str());
  return 0;
}

int run_validate(const ValidateArgs& a) {
  const auto rc = load_config(a.config);
  const auto models = load_models(a.models);
  plant::Plant plant(rc.plant);
  const auto row = campaign::validate_solution(plant, a.batch, point_from(a.point), models,
                                               rc.campaign.thresholds);
  if (row.record.status != campaign::RunStatus::done) {
    throw Error(Errc::invalid_argument, "validation run failed: " + row.record.error);
  }
  std::cout << "response,predicted,simulated,relative_gap\n";
  for (auto id : kAllResponses) {
    const double p = row.predicted[id], s = row.simulated[id];
    std::cout << fmt::format("{},{:.6g},{:.6g},{:.4f}\n", response_symbol(id), p, s,
                             p != 0.0 ? (s - p) / std::abs(p) : 0.0);
  }
  std::cout << "position," << (row.membership.inside ? "Inside" : "Outside") << '\n';
  return 0;
}

int run_campaign_cmd(const CampaignArgs& a) {
  auto rc = load_config(a.config);
  if (!a.out.empty()) rc.campaign.output_dir = a.out;
  if (rc.campaign.output_dir.empty()) {
    throw Error(Errc::invalid_argument, "no output directory: pass --out or set campaign.output_dir");
  }
  const auto report = campaign::run_campaign(rc.campaign, rc.plant);
  std::cout << fmt::format("{} records, {} Pareto fronts, {} validation runs written to {}\n",
                           report.records.size(), report.fronts.size(), report.validations.size(),
                           rc.campaign.output_dir.string());
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  return 0;
}

int run_replicate(const ReplicateArgs& a) {
  acceptance::Options opt;
  opt.scratch_dir = a.scratch;
  opt.keep_scratch = a.keep;
  const auto results = acceptance::run_all(opt);
  acceptance::print_results(std::cout, results);
  const bool ok = acceptance::all_passed(results);
  std::cout << (ok ? "all hard criteria passed\n" : "some criteria failed\n");
  return ok ? 0 : 1;
}

int run_default_config(const std::string& out) {
  emit(out, config::dump_run_config(config::default_run_config()));
  return 0;
}

}  // namespace chromdev::cli
