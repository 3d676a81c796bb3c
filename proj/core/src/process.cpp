#include "chromdev/process.hpp"

#include <cmath>

#include "chromdev/error.hpp"

namespace chromdev {

void ProcessParams::validate() const {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || values[i] <= 0.0) {
      throw Error(Errc::invalid_argument,
                  "process parameter X" + std::to_string(i + 1) + " must be positive");
    }
  }
}

double MaterialAttributes::covariate(std::size_t k) const {
  switch (k) {
    case 0: return tt_concentration;
    case 1: return tt_purity;
    case 2: return fg_concentration;
    case 3: return fg_purity;
    default: throw Error(Errc::invalid_argument, "covariate index out of range");
  }
}

void MaterialAttributes::validate() const {
  if (!(tt_concentration > 0.0) || !(fg_concentration > 0.0)) {
    throw Error(Errc::invalid_argument, "batch " + batch_id + ": concentrations must be positive");
  }
  auto purity_ok = [](double p) { return p > 0.0 && p < 100.0; };
  if (!purity_ok(tt_purity) || !purity_ok(fg_purity)) {
    throw Error(Errc::invalid_argument, "batch " + batch_id + ": purities must lie in (0, 100)");
  }
}

std::string_view response_symbol(ResponseId id) noexcept {
  switch (id) {
    case ResponseId::tt_purity: return "Y1";
    case ResponseId::tt_productivity: return "Y2";
    case ResponseId::fg_purity: return "Y3";
    case ResponseId::fg_productivity: return "Y4";
  }
  return "?";
}

ResponseId parse_response_symbol(std::string_view symbol) {
  for (ResponseId id : kAllResponses) {
    if (response_symbol(id) == symbol) return id;
  }
  throw Error(Errc::invalid_argument, "unknown response '" + std::string(symbol) + "'");
}

double ResponseVector::operator[](ResponseId id) const {
  switch (id) {
    case ResponseId::tt_purity: return tt_purity;
    case ResponseId::tt_productivity: return tt_productivity;
    case ResponseId::fg_purity: return fg_purity;
    case ResponseId::fg_productivity: return fg_productivity;
  }
  return 0.0;
}

double& ResponseVector::operator[](ResponseId id) {
  switch (id) {
    case ResponseId::tt_purity: return tt_purity;
    case ResponseId::tt_productivity: return tt_productivity;
    case ResponseId::fg_purity: return fg_purity;
    case ResponseId::fg_productivity: break;
  }
  return fg_productivity;
}

}  // namespace chromdev
