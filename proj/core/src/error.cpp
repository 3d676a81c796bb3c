#include "chromdev/error.hpp"

namespace chromdev {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::unsupported_order: return "UnsupportedOrder";
    case Errc::unsupported_factor_count: return "UnsupportedFactorCount";
    case Errc::already_allocated: return "AlreadyAllocated";
    case Errc::zero_solids: return "ZeroSolids";
    case Errc::mass_exceeds_solids: return "MassExceedsSolids";
    case Errc::zero_time: return "ZeroTime";
    case Errc::rank_deficient: return "RankDeficient";
    case Errc::insufficient_data: return "InsufficientData";
    case Errc::no_feasible_solution: return "NoFeasibleSolution";
    case Errc::unknown_batch: return "UnknownBatch";
    case Errc::plant_busy: return "PlantBusy";
    case Errc::wrong_phase: return "WrongPhase";
    case Errc::duplicate_id: return "DuplicateId";
    case Errc::storage_failure: return "StorageFailure";
    case Errc::parse_error: return "ParseError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace chromdev
