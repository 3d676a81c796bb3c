#include "chromdev/campaign.hpp"

#include <algorithm>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "chromdev/case_study.hpp"
#include "chromdev/error.hpp"
#include "chromdev/text.hpp"

namespace chromdev::campaign {

namespace fs = std::filesystem;

std::string_view to_string(DesignChoice d) noexcept {
  switch (d) {
    case DesignChoice::dsd: return "dsd";
    case DesignChoice::bbd: return "bbd";
    case DesignChoice::ccd: return "ccd";
  }
  return "?";
}

DesignChoice parse_design_choice(std::string_view text) {
  for (auto d : {DesignChoice::dsd, DesignChoice::bbd, DesignChoice::ccd}) {
    if (to_string(d) == text) return d;
  }
  throw Error(Errc::invalid_argument, "unknown design '" + std::string(text) + "'");
}

std::vector<doe::FactorSpec> CampaignConfig::factors() const {
  auto out = doe::default_factors();
  for (std::size_t j = 0; j < kProcessParamCount; ++j) {
    out[j].low = initial_values[j] - half_ranges[j];
    out[j].high = initial_values[j] + half_ranges[j];
  }
  return out;
}

void CampaignConfig::validate() const {
  for (const auto& f : factors()) {
    f.validate();
    if (!(f.low > 0.0)) {
      throw Error(Errc::invalid_argument, "factor '" + f.name + "' range must stay positive");
    }
  }
  if (optimization_batches.empty() && batch_assignment.empty()) {
    throw Error(Errc::invalid_argument, "optimization batches are required");
  }
  std::set<std::string> opt(optimization_batches.begin(), optimization_batches.end());
  opt.insert(batch_assignment.begin(), batch_assignment.end());
  std::vector<std::string> held(pareto_batches);
  for (const auto& v : validation_points) held.push_back(v.batch_id);
  for (const auto& b : held) {
    if (opt.contains(b)) {
      throw Error(Errc::invalid_argument,
                  "batch '" + b + "' is used both for the design and for validation");
    }
  }
  if (sweep_x >= kProcessParamCount || sweep_y >= kProcessParamCount || sweep_x == sweep_y) {
    throw Error(Errc::invalid_argument, "design-space sweep needs two distinct factors");
  }
  if (grid_resolution < 2) throw Error(Errc::invalid_argument, "grid resolution must be >= 2");
  if (pareto_keep == 0) throw Error(Errc::invalid_argument, "pareto_keep must be positive");
  if (!(stepwise.p_enter > 0.0 && stepwise.p_enter < 1.0) ||
      !(stepwise.p_remove > 0.0 && stepwise.p_remove < 1.0)) {
    throw Error(Errc::invalid_argument, "stepwise p values must lie in (0, 1)");
  }
  nsga.validate();
  thresholds.validate();
  for (const auto& v : validation_points) v.params.validate();
}

CampaignConfig case_study_config() {
  CampaignConfig c;
  c.optimization_batches = case_study::screening_batches();
  for (const auto& r : case_study::screening_runs()) c.batch_assignment.push_back(r.batch_id);
  c.pareto_batches = {"250401", "250409"};
  for (const auto& v : case_study::validation_points()) {
    c.validation_points.push_back({v.batch_id, v.params});
  }
  return c;
}

doe::DesignTable build_design(const CampaignConfig& config) {
  const auto factors = config.factors();
  doe::DesignTable design;
  switch (config.design) {
    case DesignChoice::dsd:
      design = doe::generate_dsd(factors, {config.n_dummy, config.n_center, config.design_seed,
                                           config.shuffle_run_order});
      break;
    case DesignChoice::bbd:
      design = doe::generate_bbd(factors, config.n_center);
      if (config.shuffle_run_order) design = doe::shuffle_run_order(design, config.design_seed);
      break;
    case DesignChoice::ccd:
      design = doe::generate_ccd(factors, config.alpha, config.n_center);
      if (config.shuffle_run_order) design = doe::shuffle_run_order(design, config.design_seed);
      break;
  }
  if (!config.batch_assignment.empty()) {
    if (config.batch_assignment.size() != design.rows.size()) {
      throw Error(Errc::invalid_argument,
                  fmt::format("batch assignment lists {} batches for {} design rows",
                              config.batch_assignment.size(), design.rows.size()));
    }
    for (std::size_t r = 0; r < design.rows.size(); ++r) {
      design.rows[r].batch_id = config.batch_assignment[r];
    }
    return design;
  }
  return doe::allocate_batches(design, config.optimization_batches, config.design_seed);
}

namespace {

ExperimentRecord finish_record(const plant::Plant& plant, std::uint64_t plant_id,
                               ExperimentRecord r) {
  const auto& t = plant.trace(plant_id);
  r.start_time = t.start_time;
  r.end_time = t.end_time;
  try {
    r.fraction = plant.emit_fraction(plant_id);
    r.responses = assay::responses_from_fraction(*r.fraction);
    r.status = RunStatus::done;
  } catch (const Error& e) {
    r.fraction.reset();
    r.responses.reset();
    r.status = RunStatus::failed;
    r.error = e.what();
  }
  return r;
}

}  // namespace

std::vector<ExperimentRecord> execute_design(plant::Plant& plant, const doe::DesignTable& design,
                                             RecordStore& store) {
  std::vector<ExperimentRecord> records;
  std::vector<std::optional<std::uint64_t>> plant_ids;
  for (std::size_t r = 0; r < design.rows.size(); ++r) {
    const auto& row = design.rows[r];
    ExperimentRecord rec;
    rec.design_row = r + 1;
    rec.spec.params = row.params();
    rec.spec.batch_id = row.batch_id.value_or("");
    rec.spec.fraction_id = fmt::format("F{}", r + 1);
    std::optional<std::uint64_t> id;
    try {
      if (!row.batch_id) throw Error(Errc::invalid_argument, "design row has no batch");
      id = plant.submit_experiment(rec.spec);
      rec.status = RunStatus::running;
    } catch (const Error& e) {
      rec.status = RunStatus::failed;
      rec.error = e.what();
    }
    records.push_back(std::move(rec));
    plant_ids.push_back(id);
  }
  plant.run_until_idle();
  std::uint64_t next_id = store.records().size() + 1;
  for (std::size_t r = 0; r < records.size(); ++r) {
    if (plant_ids[r]) records[r] = finish_record(plant, *plant_ids[r], std::move(records[r]));
    records[r].experiment_id = next_id++;
    store.append(records[r]);
  }
  return records;
}

rsm::Dataset dataset_from_records(const std::vector<ExperimentRecord>& records, ResponseId id,
                                  const std::map<std::string, MaterialAttributes>& batch_table) {
  rsm::Dataset data;
  data.response_name = std::string(response_symbol(id));
  for (const auto& r : records) {
    if (r.status != RunStatus::done || !r.responses) continue;
    const auto it = batch_table.find(r.spec.batch_id);
    if (it == batch_table.end()) {
      throw Error(Errc::unknown_batch, "record batch '" + r.spec.batch_id + "' has no attributes");
    }
    data.rows.push_back({r.spec.params, it->second, (*r.responses)[id]});
  }
  return data;
}

ModelFits fit_models(const std::vector<ExperimentRecord>& records,
                     const std::map<std::string, MaterialAttributes>& batch_table,
                     const rsm::StepwiseOptions& options) {
  const auto candidates = rsm::candidate_terms(kProcessParamCount, kMaterialAttributeCount);
  ModelFits fits;
  for (auto id : kAllResponses) {
    const auto data = dataset_from_records(records, id, batch_table);
    const auto terms = rsm::stepwise_select(data, candidates, options);
    auto& f = fits[index_of(id)];
    f.model = rsm::fit_least_squares(data, terms);
    f.diagnostics = rsm::diagnostics(f.model, data);
  }
  return fits;
}

dspace::ModelSet model_set(const ModelFits& fits) {
  return {fits[0].model, fits[1].model, fits[2].model, fits[3].model};
}

ValidationRow validate_solution(plant::Plant& plant, const std::string& batch_id,
                                const ProcessParams& params, const dspace::ModelSet& models,
                                const dspace::ThresholdSpec& thresholds) {
  const auto& table = plant.config().batch_table;
  const auto it = table.find(batch_id);
  if (it == table.end()) {
    throw Error(Errc::unknown_batch, "batch '" + batch_id + "' is not in the batch table");
  }
  ValidationRow row;
  row.batch_id = batch_id;
  row.params = params;
  for (auto id : kAllResponses) row.predicted[id] = rsm::predict(models[index_of(id)], params, it->second);
  row.membership = dspace::membership(models, params, it->second, thresholds);

  ExperimentRecord rec;
  rec.spec = {params, batch_id, "V1"};
  const auto plant_id = plant.submit_experiment(rec.spec);
  plant.run_until_idle();
  rec.experiment_id = plant_id;
  row.record = finish_record(plant, plant_id, std::move(rec));
  if (row.record.responses) row.simulated = *row.record.responses;
  return row;
}

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  if (!out) throw Error(Errc::storage_failure, "cannot write " + path.string());
}

std::string pareto_csv(const std::vector<BatchFront>& fronts) {
  std::ostringstream out;
  out << "batch,X1,X2,X3,X4,X5,X6,Y1,Y2,Y3,Y4,feasible\n";
  for (const auto& bf : fronts) {
    std::ostringstream one;
    pareto::write_front_csv(one, bf.selected);
    std::istringstream lines(one.str());
    std::string line;
    std::getline(lines, line);
    while (std::getline(lines, line)) out << bf.batch_id << ',' << line << '\n';
  }
  return out.str();
}

}  // namespace

CampaignReport run_campaign(const CampaignConfig& config, const plant::PlantConfig& plant_config) {
  config.validate();
  plant_config.validate();
  const bool write = !config.output_dir.empty();
  const fs::path dir = config.output_dir;

  std::unique_ptr<std::ofstream> event_log, sensor_log;
  if (write) {
    fs::create_directories(dir / "models");
    for (const char* f : {"records.jsonl", "events.jsonl", "sensors.jsonl", "pareto.csv"}) {
      fs::remove(dir / f);
    }
    for (const auto& entry : fs::directory_iterator(dir)) {
      const auto name = entry.path().filename().string();
      if (name.starts_with("dspace_") && name.ends_with(".csv")) fs::remove(entry.path());
    }
    event_log = std::make_unique<std::ofstream>(dir / "events.jsonl");
    sensor_log = std::make_unique<std::ofstream>(dir / "sensors.jsonl");
  }

  CampaignReport report;
  report.design = build_design(config);
  if (write) {
    std::ostringstream csv;
    doe::write_design_csv(csv, report.design);
    write_file(dir / "design.csv", csv.str());
  }

  plant::Plant plant(plant_config);
  plant.set_event_log(event_log.get());
  plant.set_sensor_log(sensor_log.get());
  RecordStore store(write ? dir / "records.jsonl" : fs::path{});

  report.records = execute_design(plant, report.design, store);
  for (const auto& r : report.records) {
    if (r.status == RunStatus::failed) {
      report.warnings.push_back(fmt::format("design row {} failed: {}", r.design_row, r.error));
    }
  }

  report.models = fit_models(report.records, plant_config.batch_table, config.stepwise);
  const auto models = model_set(report.models);
  if (write) {
    for (auto id : kAllResponses) {
      std::ostringstream txt;
      rsm::write_model_text(txt, models[index_of(id)]);
      write_file(dir / "models" / (std::string(response_symbol(id)) + ".txt"), txt.str());
    }
  }

  const auto batch_attrs = [&](const std::string& id) -> const MaterialAttributes& {
    const auto it = plant_config.batch_table.find(id);
    if (it == plant_config.batch_table.end()) {
      throw Error(Errc::unknown_batch, "batch '" + id + "' is not in the batch table");
    }
    return it->second;
  };

  for (const auto& b : config.pareto_batches) {
    pareto::OptimizationSpec spec;
    spec.objectives.assign(models.begin(), models.end());
    for (std::size_t r = 0; r < kResponseCount; ++r) {
      if (config.constraints.lower[r]) spec.constraints.push_back({models[r], *config.constraints.lower[r]});
    }
    spec.bounds = pareto::default_bounds();
    const auto factors = config.factors();
    for (std::size_t j = 0; j < kProcessParamCount; ++j) spec.bounds[j] = {factors[j].low, factors[j].high};
    spec.attrs = batch_attrs(b);

    BatchFront bf;
    bf.batch_id = b;
    try {
      bf.front = pareto::optimize(spec, config.nsga);
    } catch (const pareto::NoFeasibleSolution& e) {
      bf.front = e.front();
      bf.feasible = false;
      report.warnings.push_back("no feasible Pareto solution for batch " + b);
    }
    bf.selected = pareto::select_diverse(bf.front, config.pareto_keep);
    report.fronts.push_back(std::move(bf));
  }
  if (write) write_file(dir / "pareto.csv", pareto_csv(report.fronts));

  const auto factors = config.factors();
  std::map<std::string, int> grid_names;
  for (const auto& v : config.validation_points) {
    DesignSpaceResult ds;
    ds.batch_id = v.batch_id;
    const int n = ++grid_names[v.batch_id];
    ds.file_name = n == 1 ? fmt::format("dspace_{}.csv", v.batch_id)
                          : fmt::format("dspace_{}_{}.csv", v.batch_id, n);
    ds.grid.x = {config.sweep_x, factors[config.sweep_x].low, factors[config.sweep_x].high,
                 config.grid_resolution};
    ds.grid.y = {config.sweep_y, factors[config.sweep_y].low, factors[config.sweep_y].high,
                 config.grid_resolution};
    ds.grid.fixed = v.params;
    ds.grid.attrs = batch_attrs(v.batch_id);
    ds.result = dspace::grid_scan(models, ds.grid, config.thresholds);
    if (write) {
      std::ostringstream csv;
      dspace::write_grid_csv(csv, ds.result);
      write_file(dir / ds.file_name, csv.str());
    }
    report.design_spaces.push_back(std::move(ds));
  }

  for (const auto& v : config.validation_points) {
    auto row = validate_solution(plant, v.batch_id, v.params, models, config.thresholds);
    row.record.experiment_id = store.records().size() + 1;
    store.append(row.record);
    if (row.record.status == RunStatus::failed) {
      report.warnings.push_back("validation run for " + v.batch_id + " failed: " + row.record.error);
    }
    report.records.push_back(row.record);
    report.validations.push_back(std::move(row));
  }

  if (write) {
    std::ostringstream md;
    write_report_markdown(md, config, report);
    write_file(dir / "report.md", md.str());
  }
  return report;
}

namespace {

std::string num(double v, int decimals) { return fmt::format("{:.{}f}", v, decimals); }

}  // namespace

void write_report_markdown(std::ostream& out, const CampaignConfig& config,
                           const CampaignReport& report) {
  out << "# Campaign report\n\n";
  out << "Design: " << to_string(config.design) << ", " << report.design.rows.size()
      << " runs over " << config.optimization_batches.size() << " batches.\n\n";

  out << "## Designed runs\n\n";
  out << "| Run | X1 | X2 | X3 | X4 | X5 | X6 | Batch | Y1 | Y2 | Y3 | Y4 | Status |\n";
  out << "|---|---|---|---|---|---|---|---|---|---|---|---|---|\n";
  for (const auto& r : report.records) {
    if (r.design_row == 0) continue;
    out << "| " << r.design_row;
    for (double x : r.spec.params.values) out << " | " << num(x, 3);
    out << " | " << r.spec.batch_id;
    for (auto id : kAllResponses) {
      out << " | " << (r.responses ? num((*r.responses)[id], id == ResponseId::tt_purity ||
                                                               id == ResponseId::fg_purity
                                                           ? 2
                                                           : 1)
                                   : std::string("-"));
    }
    out << " | " << to_string(r.status) << " |\n";
  }

  out << "\n## Models\n\n";
  for (auto id : kAllResponses) {
    const auto& f = report.models[index_of(id)];
    out << "### " << response_symbol(id) << "\n\n";
    out << "R2 = " << num(f.diagnostics.r_squared, 4) << ", residual sd = "
        << text::sig6(f.diagnostics.residual_sd) << ", n = " << f.model.n_observations << "\n\n";
    out << "| Term | Coefficient | p |\n|---|---|---|\n";
    for (std::size_t k = 0; k < f.model.terms.size(); ++k) {
      out << "| " << f.model.terms[k].symbol() << " | " << text::sig6(f.model.coefficients[k])
          << " | " << text::sig6(f.model.p_values[k]) << " |\n";
    }
    out << '\n';
  }

  out << "## Pareto solutions\n\n";
  for (const auto& bf : report.fronts) {
    out << "### Batch " << bf.batch_id << "\n\n";
    out << "First front: " << bf.front.solutions.size() << " points"
        << (bf.feasible ? "" : " (none feasible)") << ".\n\n";
    out << "| No. | X1 | X2 | X3 | X4 | X5 | X6 | Y1 | Y2 | Y3 | Y4 |\n";
    out << "|---|---|---|---|---|---|---|---|---|---|---|\n";
    for (std::size_t i = 0; i < bf.selected.solutions.size(); ++i) {
      const auto& s = bf.selected.solutions[i];
      out << "| " << (i + 1);
      for (double x : s.x.values) out << " | " << num(x, 3);
      for (std::size_t k = 0; k < s.objectives.size(); ++k) {
        out << " | " << num(s.objectives[k], k % 2 == 0 ? 2 : 1);
      }
      out << " |\n";
    }
    out << '\n';
  }

  out << "## Design space\n\n";
  out << "| Batch | File | Inside nodes | Boundary nodes |\n|---|---|---|---|\n";
  for (const auto& ds : report.design_spaces) {
    const auto inside = std::count_if(ds.result.cells.begin(), ds.result.cells.end(),
                                      [](const auto& c) { return c.inside; });
    out << "| " << ds.batch_id << " | " << ds.file_name << " | " << inside << "/"
        << ds.result.cells.size() << " | " << dspace::boundary_cells(ds.result).size() << " |\n";
  }

  out << "\n## Validation\n\n";
  out << "| Batch | Y1 pred | Y1 sim | Y2 pred | Y2 sim | Y3 pred | Y3 sim | Y4 pred | Y4 sim "
         "| Position |\n";
  out << "|---|---|---|---|---|---|---|---|---|---|\n";
  for (const auto& v : report.validations) {
    out << "| " << v.batch_id;
    for (auto id : kAllResponses) {
      const int d = (id == ResponseId::tt_purity || id == ResponseId::fg_purity) ? 2 : 1;
      out << " | " << num(v.predicted[id], d) << " | " << num(v.simulated[id], d);
    }
    out << " | " << (v.membership.inside ? "Inside" : "Outside") << " |\n";
  }

  if (!report.warnings.empty()) {
    out << "\n## Warnings\n\n";
    for (const auto& w : report.warnings) out << "- " << w << '\n';
  }
}

}  // namespace chromdev::campaign
