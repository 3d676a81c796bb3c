#include "chromdev/record_store.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "chromdev/error.hpp"

namespace chromdev::campaign {

using nlohmann::json;

std::string_view to_string(RunStatus s) noexcept {
  switch (s) {
    case RunStatus::pending: return "pending";
    case RunStatus::running: return "running";
    case RunStatus::done: return "done";
    case RunStatus::failed: return "failed";
  }
  return "?";
}

RunStatus parse_run_status(std::string_view text) {
  for (auto s : {RunStatus::pending, RunStatus::running, RunStatus::done, RunStatus::failed}) {
    if (to_string(s) == text) return s;
  }
  throw Error(Errc::parse_error, "unknown run status '" + std::string(text) + "'");
}

void ExperimentRecord::validate() const {
  if (status != RunStatus::done) return;
  if (!fraction || !responses) {
    throw Error(Errc::invalid_argument, "done record needs fraction and responses");
  }
  const auto expected = assay::responses_from_fraction(*fraction);
  for (auto id : kAllResponses) {
    const double a = expected[id], b = (*responses)[id];
    if (std::abs(a - b) > 1e-9 * std::max(1.0, std::abs(a))) {
      throw Error(Errc::invalid_argument, "record responses disagree with its fraction");
    }
  }
}

namespace {

json params_json(const ProcessParams& p) { return json(p.values); }

ProcessParams params_from(const json& j) {
  ProcessParams p;
  if (!j.is_array() || j.size() != kProcessParamCount) {
    throw Error(Errc::parse_error, "params must be an array of 6 numbers");
  }
  for (std::size_t i = 0; i < kProcessParamCount; ++i) p[i] = j.at(i).get<double>();
  return p;
}

}  // namespace

std::string record_to_json(const ExperimentRecord& r) {
  json j{{"experiment_id", r.experiment_id},
         {"design_row", r.design_row},
         {"batch_id", r.spec.batch_id},
         {"fraction_id", r.spec.fraction_id},
         {"params", params_json(r.spec.params)},
         {"start_time", r.start_time},
         {"end_time", r.end_time},
         {"status", to_string(r.status)}};
  if (r.fraction) {
    const auto& f = *r.fraction;
    j["fraction"] = {{"m_tt_total", f.m_tt_total}, {"m_fg_total", f.m_fg_total},
                     {"m_ts_total", f.m_ts_total}, {"volume", f.volume},
                     {"process_time", f.process_time}};
  }
  if (r.responses) {
    const auto& y = *r.responses;
    j["responses"] = {{"Y1", y.tt_purity},
                      {"Y2", y.tt_productivity},
                      {"Y3", y.fg_purity},
                      {"Y4", y.fg_productivity}};
  }
  if (!r.error.empty()) j["error"] = r.error;
  return j.dump();
}

ExperimentRecord record_from_json(std::string_view line) {
  try {
    const json j = json::parse(line);
    ExperimentRecord r;
    r.experiment_id = j.at("experiment_id").get<std::uint64_t>();
    r.design_row = j.value("design_row", std::size_t{0});
    r.spec.batch_id = j.at("batch_id").get<std::string>();
    r.spec.fraction_id = j.value("fraction_id", std::string("F1"));
    r.spec.params = params_from(j.at("params"));
    r.start_time = j.value("start_time", 0.0);
    r.end_time = j.value("end_time", 0.0);
    r.status = parse_run_status(j.at("status").get<std::string>());
    if (j.contains("fraction")) {
      const auto& f = j.at("fraction");
      assay::FractionRecord fr;
      fr.m_tt_total = f.at("m_tt_total").get<double>();
      fr.m_fg_total = f.at("m_fg_total").get<double>();
      fr.m_ts_total = f.at("m_ts_total").get<double>();
      fr.volume = f.at("volume").get<double>();
      fr.process_time = f.at("process_time").get<double>();
      fr.batch_id = r.spec.batch_id;
      fr.params = r.spec.params;
      r.fraction = fr;
    }
    if (j.contains("responses")) {
      const auto& y = j.at("responses");
      r.responses = ResponseVector{y.at("Y1").get<double>(), y.at("Y2").get<double>(),
                                   y.at("Y3").get<double>(), y.at("Y4").get<double>()};
    }
    r.error = j.value("error", std::string());
    return r;
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, std::string("bad record: ") + e.what());
  }
}

std::vector<ExperimentRecord> load_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::storage_failure, "cannot open " + path.string());
  std::vector<ExperimentRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(record_from_json(line));
  }
  return out;
}

RecordStore::RecordStore(std::filesystem::path path) : path_(std::move(path)) {
  if (!path_.empty() && std::filesystem::exists(path_)) records_ = load_records(path_);
}

void RecordStore::append(const ExperimentRecord& record) {
  const bool dup = std::any_of(records_.begin(), records_.end(), [&](const auto& r) {
    return r.experiment_id == record.experiment_id;
  });
  if (dup) {
    throw Error(Errc::duplicate_id,
                "record " + std::to_string(record.experiment_id) + " already stored");
  }
  if (!path_.empty()) {
    std::ofstream out(path_, std::ios::app);
    out << record_to_json(record) << '\n';
    out.flush();
    if (!out) throw Error(Errc::storage_failure, "cannot append to " + path_.string());
  }
  records_.push_back(record);
}

void append_record(RecordStore& store, const ExperimentRecord& record) { store.append(record); }

}  // namespace chromdev::campaign
