#include "chromdev/config_io.hpp"

#include <fstream>
#include <algorithm>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "chromdev/case_study.hpp"
#include "chromdev/error.hpp"

namespace chromdev::config {

using nlohmann::json;

namespace {

void check_keys(const json& j, std::string_view where, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw Error(Errc::parse_error, std::string(where) + " must be an object");
  for (const auto& [key, _] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw Error(Errc::parse_error, "unknown key '" + key + "' in " + std::string(where));
    }
  }
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

ProcessParams params_from(const json& j) {
  if (!j.is_array() || j.size() != kProcessParamCount) {
    throw Error(Errc::parse_error, "process parameters must be an array of 6 numbers");
  }
  ProcessParams p;
  for (std::size_t i = 0; i < kProcessParamCount; ++i) p[i] = j.at(i).get<double>();
  return p;
}

dspace::ThresholdSpec thresholds_from(const json& j, std::string_view where) {
  check_keys(j, where, {"Y1", "Y2", "Y3", "Y4"});
  dspace::ThresholdSpec t;
  for (auto id : kAllResponses) {
    const std::string key(response_symbol(id));
    if (j.contains(key) && !j.at(key).is_null()) t.lower[index_of(id)] = j.at(key).get<double>();
  }
  return t;
}

json thresholds_json(const dspace::ThresholdSpec& t) {
  json j = json::object();
  for (auto id : kAllResponses) {
    if (t.lower[index_of(id)]) j[std::string(response_symbol(id))] = *t.lower[index_of(id)];
  }
  return j;
}

std::size_t factor_index(const json& j) {
  const auto s = j.get<std::string>();
  if (s.size() == 2 && s[0] == 'X' && s[1] >= '1' && s[1] <= '6') {
    return static_cast<std::size_t>(s[1] - '1');
  }
  throw Error(Errc::parse_error, "expected a factor symbol X1..X6, got '" + s + "'");
}

void apply_campaign(const json& j, campaign::CampaignConfig& c) {
  check_keys(j, "campaign",
             {"initial_values", "half_ranges", "design", "n_dummy", "n_center", "alpha",
              "design_seed", "shuffle_run_order", "optimization_batches", "batch_assignment",
              "pareto_batches", "validation_points", "stepwise", "nsga", "pareto_keep",
              "constraints", "thresholds", "grid_resolution", "sweep", "output_dir"});
  if (j.contains("initial_values")) c.initial_values = params_from(j.at("initial_values"));
  read(j, "half_ranges", c.half_ranges);
  if (j.contains("design")) c.design = campaign::parse_design_choice(j.at("design").get<std::string>());
  read(j, "n_dummy", c.n_dummy);
  read(j, "n_center", c.n_center);
  if (j.contains("alpha")) {
    const auto a = j.at("alpha").get<std::string>();
    if (a == "rotatable") c.alpha = doe::AlphaMode::rotatable;
    else if (a == "face_centered") c.alpha = doe::AlphaMode::face_centered;
    else throw Error(Errc::parse_error, "alpha must be 'rotatable' or 'face_centered'");
  }
  read(j, "design_seed", c.design_seed);
  read(j, "shuffle_run_order", c.shuffle_run_order);
  read(j, "optimization_batches", c.optimization_batches);
  read(j, "batch_assignment", c.batch_assignment);
  read(j, "pareto_batches", c.pareto_batches);
  if (j.contains("validation_points")) {
    c.validation_points.clear();
    for (const auto& v : j.at("validation_points")) {
      check_keys(v, "validation point", {"batch", "params"});
      c.validation_points.push_back({v.at("batch").get<std::string>(), params_from(v.at("params"))});
    }
  }
  if (j.contains("stepwise")) {
    const auto& s = j.at("stepwise");
    check_keys(s, "stepwise", {"p_enter", "p_remove", "heredity", "min_residual_dof"});
    read(s, "p_enter", c.stepwise.p_enter);
    read(s, "p_remove", c.stepwise.p_remove);
    read(s, "min_residual_dof", c.stepwise.min_residual_dof);
    if (s.contains("heredity")) c.stepwise.heredity = rsm::parse_heredity(s.at("heredity").get<std::string>());
  }
  if (j.contains("nsga")) {
    const auto& s = j.at("nsga");
    check_keys(s, "nsga", {"population", "generations", "seed", "sbx_eta", "mutation_eta",
                           "mutation_prob", "crossover_prob"});
    read(s, "population", c.nsga.population);
    read(s, "generations", c.nsga.generations);
    read(s, "seed", c.nsga.seed);
    read(s, "sbx_eta", c.nsga.sbx_eta);
    read(s, "mutation_eta", c.nsga.mutation_eta);
    read(s, "mutation_prob", c.nsga.mutation_prob);
    read(s, "crossover_prob", c.nsga.crossover_prob);
  }
  read(j, "pareto_keep", c.pareto_keep);
  if (j.contains("constraints")) c.constraints = thresholds_from(j.at("constraints"), "constraints");
  if (j.contains("thresholds")) c.thresholds = thresholds_from(j.at("thresholds"), "thresholds");
  read(j, "grid_resolution", c.grid_resolution);
  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    if (!s.is_array() || s.size() != 2) throw Error(Errc::parse_error, "sweep must list two factors");
    c.sweep_x = factor_index(s.at(0));
    c.sweep_y = factor_index(s.at(1));
  }
  if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
}

void apply_plant(const json& j, plant::PlantConfig& p, const std::filesystem::path& base_dir) {
  check_keys(j, "plant",
             {"column_inner_diameter", "bed_height", "column_height", "level_setpoint",
              "equil_flow", "regen_flow", "batches", "truth_dir", "noise", "sensor_noise",
              "stabilization", "outlet_pump_bias", "level_filter_alpha", "seed", "dt",
              "sensor_log_interval", "acceleration", "queueing"});
  read(j, "column_inner_diameter", p.column_inner_diameter);
  read(j, "bed_height", p.bed_height);
  read(j, "column_height", p.column_height);
  read(j, "level_setpoint", p.level_setpoint);
  read(j, "equil_flow", p.equil_flow);
  read(j, "regen_flow", p.regen_flow);
  if (j.contains("batches")) {
    p.batch_table.clear();
    for (const auto& b : j.at("batches")) {
      check_keys(b, "batch", {"id", "z"});
      const auto z = b.at("z").get<std::vector<double>>();
      if (z.size() != kMaterialAttributeCount) throw Error(Errc::parse_error, "batch z needs 4 values");
      MaterialAttributes a{b.at("id").get<std::string>(), z[0], z[1], z[2], z[3]};
      a.validate();
      p.batch_table[a.batch_id] = a;
    }
  }
  if (j.contains("truth_dir")) {
    std::filesystem::path dir = j.at("truth_dir").get<std::string>();
    if (dir.is_relative() && !base_dir.empty()) dir = base_dir / dir;
    const auto load = [&](const char* name) {
      std::ifstream in(dir / name);
      if (!in) throw Error(Errc::parse_error, "cannot open truth model " + (dir / name).string());
      return rsm::read_model_text(in);
    };
    p.truth = {load("Y1.txt"), load("Y2.txt"), load("Y3.txt")};
  }
  if (j.contains("noise")) {
    const auto& n = j.at("noise");
    check_keys(n, "noise", {"Y1", "Y2", "Y3"});
    read(n, "Y1", p.noise.tt_purity);
    read(n, "Y2", p.noise.tt_productivity);
    read(n, "Y3", p.noise.fg_purity);
  }
  if (j.contains("sensor_noise")) {
    const auto& n = j.at("sensor_noise");
    check_keys(n, "sensor_noise", {"relative", "ph", "orp", "nir", "temperature", "level"});
    read(n, "relative", p.sensor_noise.relative);
    read(n, "ph", p.sensor_noise.ph);
    read(n, "orp", p.sensor_noise.orp);
    read(n, "nir", p.sensor_noise.nir);
    read(n, "temperature", p.sensor_noise.temperature);
    read(n, "level", p.sensor_noise.level);
  }
  if (j.contains("stabilization")) {
    const auto& s = j.at("stabilization");
    check_keys(s, "stabilization", {"rel_threshold", "window", "timeout"});
    read(s, "rel_threshold", p.stabilization.rel_threshold);
    read(s, "window", p.stabilization.window);
    read(s, "timeout", p.stabilization.timeout);
  }
  read(j, "outlet_pump_bias", p.outlet_pump_bias);
  read(j, "level_filter_alpha", p.level_filter_alpha);
  read(j, "seed", p.seed);
  read(j, "dt", p.dt);
  read(j, "sensor_log_interval", p.sensor_log_interval);
  read(j, "acceleration", p.acceleration);
  read(j, "queueing", p.queueing);
}

}  // namespace

RunConfig default_run_config() {
  return {campaign::case_study_config(), case_study::plant_config()};
}

RunConfig parse_run_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  RunConfig rc = default_run_config();
  try {
    const json j = json::parse(json_text);
    check_keys(j, "config", {"schema_version", "campaign", "plant"});
    if (!j.contains("schema_version") || j.at("schema_version").get<int>() != kSchemaVersion) {
      throw Error(Errc::parse_error,
                  "config schema_version must be " + std::to_string(kSchemaVersion));
    }
    if (j.contains("campaign")) apply_campaign(j.at("campaign"), rc.campaign);
    if (j.contains("plant")) apply_plant(j.at("plant"), rc.plant, base_dir);
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, std::string("invalid config: ") + e.what());
  }
  return rc;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::parse_error, "cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str(), path.parent_path());
}

std::string dump_run_config(const RunConfig& rc) {
  const auto& c = rc.campaign;
  const auto& p = rc.plant;
  json vp = json::array();
  for (const auto& v : c.validation_points) vp.push_back({{"batch", v.batch_id}, {"params", v.params.values}});
  json cj{
      {"initial_values", c.initial_values.values},
      {"half_ranges", c.half_ranges},
      {"design", campaign::to_string(c.design)},
      {"n_dummy", c.n_dummy},
      {"n_center", c.n_center},
      {"alpha", c.alpha == doe::AlphaMode::rotatable ? "rotatable" : "face_centered"},
      {"design_seed", c.design_seed},
      {"shuffle_run_order", c.shuffle_run_order},
      {"optimization_batches", c.optimization_batches},
      {"batch_assignment", c.batch_assignment},
      {"pareto_batches", c.pareto_batches},
      {"validation_points", vp},
      {"stepwise",
       {{"p_enter", c.stepwise.p_enter},
        {"p_remove", c.stepwise.p_remove},
        {"heredity", rsm::to_string(c.stepwise.heredity)},
        {"min_residual_dof", c.stepwise.min_residual_dof}}},
      {"nsga",
       {{"population", c.nsga.population},
        {"generations", c.nsga.generations},
        {"seed", c.nsga.seed},
        {"sbx_eta", c.nsga.sbx_eta},
        {"mutation_eta", c.nsga.mutation_eta},
        {"mutation_prob", c.nsga.mutation_prob},
        {"crossover_prob", c.nsga.crossover_prob}}},
      {"pareto_keep", c.pareto_keep},
      {"constraints", thresholds_json(c.constraints)},
      {"thresholds", thresholds_json(c.thresholds)},
      {"grid_resolution", c.grid_resolution},
      {"sweep", {"X" + std::to_string(c.sweep_x + 1), "X" + std::to_string(c.sweep_y + 1)}},
  };
  if (!c.output_dir.empty()) cj["output_dir"] = c.output_dir.string();
  json batches = json::array();
  for (const auto& [id, a] : p.batch_table) {
    batches.push_back({{"id", id},
                       {"z", {a.tt_concentration, a.tt_purity, a.fg_concentration, a.fg_purity}}});
  }
  json pj{
      {"column_inner_diameter", p.column_inner_diameter},
      {"bed_height", p.bed_height},
      {"column_height", p.column_height},
      {"level_setpoint", p.level_setpoint},
      {"equil_flow", p.equil_flow},
      {"regen_flow", p.regen_flow},
      {"batches", batches},
      {"noise", {{"Y1", p.noise.tt_purity}, {"Y2", p.noise.tt_productivity}, {"Y3", p.noise.fg_purity}}},
      {"sensor_noise",
       {{"relative", p.sensor_noise.relative},
        {"ph", p.sensor_noise.ph},
        {"orp", p.sensor_noise.orp},
        {"nir", p.sensor_noise.nir},
        {"temperature", p.sensor_noise.temperature},
        {"level", p.sensor_noise.level}}},
      {"stabilization",
       {{"rel_threshold", p.stabilization.rel_threshold},
        {"window", p.stabilization.window},
        {"timeout", p.stabilization.timeout}}},
      {"outlet_pump_bias", p.outlet_pump_bias},
      {"level_filter_alpha", p.level_filter_alpha},
      {"seed", p.seed},
      {"dt", p.dt},
      {"sensor_log_interval", p.sensor_log_interval},
      {"acceleration", p.acceleration},
      {"queueing", p.queueing},
  };
  json doc{{"schema_version", kSchemaVersion}, {"campaign", cj}, {"plant", pj}};
  return doc.dump(2) + "\n";
}

}  // namespace chromdev::config
