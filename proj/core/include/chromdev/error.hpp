#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace chromdev {

/// Failure categories reported by the library. Each maps to a stable name
/// used in CLI diagnostics and persisted records.
enum class Errc {
  invalid_argument,
  unsupported_order,
  unsupported_factor_count,
  already_allocated,
  zero_solids,
  mass_exceeds_solids,
  zero_time,
  rank_deficient,
  insufficient_data,
  no_feasible_solution,
  unknown_batch,
  plant_busy,
  wrong_phase,
  duplicate_id,
  storage_failure,
  parse_error,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what);

  [[nodiscard]] Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

}  // namespace chromdev
