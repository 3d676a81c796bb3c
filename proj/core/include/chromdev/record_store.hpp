#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chromdev/assay.hpp"
#include "chromdev/plant.hpp"
#include "chromdev/process.hpp"

namespace chromdev::campaign {

enum class RunStatus { pending, running, done, failed };

std::string_view to_string(RunStatus s) noexcept;
RunStatus parse_run_status(std::string_view text);

struct ExperimentRecord {
  std::uint64_t experiment_id = 0;
  std::size_t design_row = 0;  // 1-based; 0 for runs outside the design
  plant::ExperimentSpec spec;
  double start_time = 0.0;  // simulated s
  double end_time = 0.0;
  RunStatus status = RunStatus::pending;
  std::optional<assay::FractionRecord> fraction;
  std::optional<ResponseVector> responses;
  std::string error;

  /// Throws InvalidArgument when a done record lacks its fraction or its
  /// responses disagree with the fraction.
  void validate() const;
};

std::string record_to_json(const ExperimentRecord& record);
ExperimentRecord record_from_json(std::string_view line);

/// Append-only JSONL store. Existing lines are loaded on open so a store is
/// readable after a restart. An empty path keeps the store in memory.
class RecordStore {
public:
  RecordStore() = default;
  explicit RecordStore(std::filesystem::path path);

  /// Throws DuplicateId for a known id and StorageFailure when the write fails.
  void append(const ExperimentRecord& record);

  [[nodiscard]] const std::vector<ExperimentRecord>& records() const { return records_; }
  [[nodiscard]] const std::filesystem::path& path() const { return path_; }

private:
  std::filesystem::path path_;
  std::vector<ExperimentRecord> records_;
};

/// Free-function form of RecordStore::append.
void append_record(RecordStore& store, const ExperimentRecord& record);

/// Reads every record of a JSONL file.
std::vector<ExperimentRecord> load_records(const std::filesystem::path& path);

}  // namespace chromdev::campaign
