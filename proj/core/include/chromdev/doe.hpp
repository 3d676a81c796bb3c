#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chromdev/process.hpp"

namespace chromdev::doe {

/// One design factor with natural-unit bounds. The center point is derived,
/// never stored.
struct FactorSpec {
  std::string name;
  double low = 0.0;
  double high = 0.0;
  std::string unit;

  [[nodiscard]] double center() const { return 0.5 * (low + high); }
  [[nodiscard]] double half_range() const { return 0.5 * (high - low); }
  [[nodiscard]] double decode(double coded) const { return center() + coded * half_range(); }
  [[nodiscard]] double encode(double natural) const { return (natural - center()) / half_range(); }

  void validate() const;
};

/// The six operating-variable ranges of the ginkgo case study
/// (feed 0.5-1.5 BV/h x 1-2 h, wash 1.5-2.5 BV/h x 0.5-1.5 h,
/// elution 2.5-3.5 BV/h x 0.5-1.5 h).
std::vector<FactorSpec> default_factors();

/// Square {-1, 0, +1} matrix with zero diagonal and C^T C = (n-1) I.
class ConferenceMatrix {
public:
  ConferenceMatrix(std::size_t order, std::vector<int> entries);

  [[nodiscard]] std::size_t order() const { return order_; }
  [[nodiscard]] int operator()(std::size_t row, std::size_t col) const {
    return entries_[row * order_ + col];
  }
  [[nodiscard]] std::span<const int> row(std::size_t r) const {
    return {entries_.data() + r * order_, order_};
  }

  /// Exact integer check of the defining properties.
  [[nodiscard]] bool is_valid() const;

private:
  std::size_t order_;
  std::vector<int> entries_;
};

/// Embedded catalogue lookup for even orders 2..16; UnsupportedOrder otherwise.
ConferenceMatrix conference_matrix(std::size_t order);

enum class RowRole { foldover, center, edge, corner, axial };

std::string_view to_string(RowRole role) noexcept;
RowRole parse_row_role(std::string_view text);

enum class DesignKind { definitive_screening, box_behnken, central_composite, imported };

struct DesignRow {
  std::vector<double> coded;    // one entry per visible factor
  std::vector<double> natural;  // decoded values, same order
  RowRole role = RowRole::center;
  std::optional<std::string> batch_id;
  bool out_of_bounds = false;   // rotatable CCD axial points may leave [low, high]

  /// Requires exactly six factors.
  [[nodiscard]] ProcessParams params() const;
};

struct DesignTable {
  std::vector<FactorSpec> factors;
  std::vector<DesignRow> rows;
  std::size_t dummy_count = 0;
  std::uint64_t seed = 0;
  DesignKind kind = DesignKind::imported;

  [[nodiscard]] bool has_batches() const;
};

struct DsdOptions {
  std::size_t n_dummy = 0;
  std::size_t n_extra_center = 0;
  std::uint64_t seed = 0;
  bool shuffle_run_order = false;
};

/// Definitive screening design: fold-over pairs [C; -C] from a conference
/// matrix of order |factors| + n_dummy (dummy columns last, then dropped),
/// followed by 1 + n_extra_center center rows.
DesignTable generate_dsd(std::span<const FactorSpec> factors, const DsdOptions& options);

/// Box-Behnken design for 3..7 factors plus n_center center rows.
DesignTable generate_bbd(std::span<const FactorSpec> factors, std::size_t n_center);

enum class AlphaMode { rotatable, face_centered };

[[nodiscard]] double ccd_alpha(std::size_t n_factors, AlphaMode mode);

/// Central composite design for 2..6 factors: 2^k corners, 2k axial rows, centers.
DesignTable generate_ccd(std::span<const FactorSpec> factors, AlphaMode mode,
                         std::size_t n_center);

/// Balanced seeded assignment of batches to rows; per-batch counts differ by
/// at most one. Throws AlreadyAllocated if any row already carries a batch.
DesignTable allocate_batches(const DesignTable& design, std::span<const std::string> batches,
                             std::uint64_t seed);

/// Seeded permutation of run order that keeps the table otherwise unchanged.
DesignTable shuffle_run_order(const DesignTable& design, std::uint64_t seed);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  bool ok = false;
};

/// Structural checks of a DSD in canonical order (fold-over pairs adjacent,
/// centers last). Dummy columns need not be present: the one-zero property is
/// reconstructed from the visible columns and dummy_count.
VerificationReport verify_dsd(const DesignTable& design);

/// True when b equals a up to row order and per-column sign flips of the
/// coded matrix.
bool equivalent_up_to_permutation(const DesignTable& a, const DesignTable& b,
                                  double tolerance = 1e-9);

/// CSV with header `run,X1,...,Xk,role,batch`, 6 significant digits, LF.
void write_design_csv(std::ostream& out, const DesignTable& design);

/// Parses the CSV written by write_design_csv; coded values are recomputed
/// from `factors`.
DesignTable read_design_csv(std::istream& in, std::span<const FactorSpec> factors,
                            std::size_t dummy_count = 0);

}  // namespace chromdev::doe
