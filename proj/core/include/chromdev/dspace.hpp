#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "chromdev/process.hpp"
#include "chromdev/rsm.hpp"

namespace chromdev::dspace {

/// Optional lower bound per response, indexed Y1..Y4.
struct ThresholdSpec {
  std::array<std::optional<double>, kResponseCount> lower{};

  /// Throws InvalidArgument unless at least one bound is set.
  void validate() const;
};

/// Thresholds used in the case study: Y1 >= 6, Y2 >= 50, Y3 >= 24, Y4 >= 200.
ThresholdSpec default_thresholds();

/// Models indexed Y1..Y4.
using ModelSet = std::array<rsm::RegressionModel, kResponseCount>;

struct Membership {
  bool inside = true;
  /// (predicted - bound) / |bound|; NaN for responses without a bound.
  std::array<double, kResponseCount> margins{};
  std::array<double, kResponseCount> predicted{};
};

Membership membership(const ModelSet& models, const ProcessParams& params,
                      const MaterialAttributes& attrs, const ThresholdSpec& thresholds);

struct Axis {
  std::size_t factor = 0;  // zero-based
  double low = 0.0;
  double high = 1.0;
  std::size_t resolution = 41;
};

struct GridSpec {
  Axis x;
  Axis y;
  ProcessParams fixed;  // swept coordinates are overwritten
  MaterialAttributes attrs;

  void validate() const;
};

struct DesignSpaceGrid {
  std::vector<double> x_values;
  std::vector<double> y_values;
  /// Row-major, y outer: cell (ix, iy) is at iy * nx + ix.
  std::vector<Membership> cells;

  [[nodiscard]] std::size_t nx() const { return x_values.size(); }
  [[nodiscard]] std::size_t ny() const { return y_values.size(); }
  [[nodiscard]] const Membership& at(std::size_t ix, std::size_t iy) const {
    return cells[iy * nx() + ix];
  }
  /// Most violated normalized criterion of a cell (minimum margin).
  [[nodiscard]] double worst_margin(std::size_t ix, std::size_t iy) const;
};

DesignSpaceGrid grid_scan(const ModelSet& models, const GridSpec& grid,
                          const ThresholdSpec& thresholds);

/// Flat cell indices whose membership differs from at least one 4-neighbour.
std::vector<std::size_t> boundary_cells(const DesignSpaceGrid& grid);

/// CSV `x_axis,y_axis,inside,margin_Y1,margin_Y2,margin_Y3,margin_Y4`.
void write_grid_csv(std::ostream& out, const DesignSpaceGrid& grid);

}  // namespace chromdev::dspace
