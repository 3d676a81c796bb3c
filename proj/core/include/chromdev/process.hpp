#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>

namespace chromdev {

inline constexpr std::size_t kProcessParamCount = 6;
inline constexpr std::size_t kMaterialAttributeCount = 4;
inline constexpr std::size_t kResponseCount = 4;

/// The six operating variables of one chromatography cycle.
///   X1 feed flow (BV/h)     X2 feed time (h)
///   X3 wash flow (BV/h)     X4 wash time (h)
///   X5 elution flow (BV/h)  X6 elution time (h)
struct ProcessParams {
  std::array<double, kProcessParamCount> values{};

  ProcessParams() = default;
  constexpr ProcessParams(double feed_flow, double feed_time, double wash_flow,
                          double wash_time, double elution_flow, double elution_time)
      : values{feed_flow, feed_time, wash_flow, wash_time, elution_flow, elution_time} {}

  [[nodiscard]] double feed_flow() const { return values[0]; }
  [[nodiscard]] double feed_time() const { return values[1]; }
  [[nodiscard]] double wash_flow() const { return values[2]; }
  [[nodiscard]] double wash_time() const { return values[3]; }
  [[nodiscard]] double elution_flow() const { return values[4]; }
  [[nodiscard]] double elution_time() const { return values[5]; }

  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }

  /// Throws InvalidArgument unless every value is finite and strictly positive.
  void validate() const;

  friend bool operator==(const ProcessParams&, const ProcessParams&) = default;
};

/// Feed-batch covariates Z1..Z4.
struct MaterialAttributes {
  std::string batch_id;
  double tt_concentration = 0.0;  // Z1, mg/mL
  double tt_purity = 0.0;         // Z2, %
  double fg_concentration = 0.0;  // Z3, mg/mL
  double fg_purity = 0.0;         // Z4, %

  /// Covariate by zero-based index (0 -> Z1).
  [[nodiscard]] double covariate(std::size_t k) const;

  void validate() const;

  friend bool operator==(const MaterialAttributes&, const MaterialAttributes&) = default;
};

enum class ResponseId : std::size_t {
  tt_purity = 0,        // Y1, %
  tt_productivity = 1,  // Y2, mg/h
  fg_purity = 2,        // Y3, %
  fg_productivity = 3,  // Y4, mg/h
};

inline constexpr std::array<ResponseId, kResponseCount> kAllResponses{
    ResponseId::tt_purity, ResponseId::tt_productivity, ResponseId::fg_purity,
    ResponseId::fg_productivity};

/// "Y1".."Y4".
std::string_view response_symbol(ResponseId id) noexcept;
/// Parses "Y1".."Y4"; throws InvalidArgument otherwise.
ResponseId parse_response_symbol(std::string_view symbol);

inline constexpr std::size_t index_of(ResponseId id) noexcept {
  return static_cast<std::size_t>(id);
}

struct ResponseVector {
  double tt_purity = 0.0;
  double tt_productivity = 0.0;
  double fg_purity = 0.0;
  double fg_productivity = 0.0;

  [[nodiscard]] double operator[](ResponseId id) const;
  double& operator[](ResponseId id);

  friend bool operator==(const ResponseVector&, const ResponseVector&) = default;
};

}  // namespace chromdev
