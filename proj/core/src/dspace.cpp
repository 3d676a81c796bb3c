#include "chromdev/dspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "chromdev/error.hpp"
#include "chromdev/text.hpp"

namespace chromdev::dspace {

void ThresholdSpec::validate() const {
  if (std::none_of(lower.begin(), lower.end(), [](const auto& v) { return v.has_value(); })) {
    throw Error(Errc::invalid_argument, "at least one response threshold is required");
  }
}

ThresholdSpec default_thresholds() { return {{6.0, 50.0, 24.0, 200.0}}; }

Membership membership(const ModelSet& models, const ProcessParams& params,
                      const MaterialAttributes& attrs, const ThresholdSpec& thresholds) {
  Membership m;
  for (std::size_t r = 0; r < kResponseCount; ++r) {
    m.margins[r] = std::numeric_limits<double>::quiet_NaN();
    m.predicted[r] = std::numeric_limits<double>::quiet_NaN();
    if (!thresholds.lower[r]) continue;
    const double bound = *thresholds.lower[r];
    const double pred = rsm::predict(models[r], params, attrs);
    m.predicted[r] = pred;
    m.margins[r] = (pred - bound) / (bound != 0.0 ? std::abs(bound) : 1.0);
    if (pred < bound) m.inside = false;
  }
  return m;
}

void GridSpec::validate() const {
  for (const Axis* a : {&x, &y}) {
    if (a->factor >= kProcessParamCount) throw Error(Errc::invalid_argument, "axis factor out of range");
    if (a->resolution < 2) throw Error(Errc::invalid_argument, "grid resolution must be >= 2");
    if (!(a->low < a->high)) throw Error(Errc::invalid_argument, "axis requires low < high");
  }
  if (x.factor == y.factor) throw Error(Errc::invalid_argument, "swept factors must differ");
}

double DesignSpaceGrid::worst_margin(std::size_t ix, std::size_t iy) const {
  double worst = std::numeric_limits<double>::infinity();
  for (double m : at(ix, iy).margins)
    if (!std::isnan(m)) worst = std::min(worst, m);
  return worst;
}

namespace {

std::vector<double> axis_values(const Axis& a) {
  std::vector<double> v(a.resolution);
  const double n = static_cast<double>(a.resolution - 1);
  for (std::size_t i = 0; i < a.resolution; ++i) {
    v[i] = a.low + (a.high - a.low) * static_cast<double>(i) / n;
  }
  v.back() = a.high;
  return v;
}

}  // namespace

DesignSpaceGrid grid_scan(const ModelSet& models, const GridSpec& grid,
                          const ThresholdSpec& thresholds) {
  grid.validate();
  thresholds.validate();
  DesignSpaceGrid out;
  out.x_values = axis_values(grid.x);
  out.y_values = axis_values(grid.y);
  out.cells.reserve(out.nx() * out.ny());
  ProcessParams p = grid.fixed;
  for (double yv : out.y_values) {
    p[grid.y.factor] = yv;
    for (double xv : out.x_values) {
      p[grid.x.factor] = xv;
      out.cells.push_back(membership(models, p, grid.attrs, thresholds));
    }
  }
  return out;
}

std::vector<std::size_t> boundary_cells(const DesignSpaceGrid& grid) {
  std::vector<std::size_t> out;
  const std::size_t nx = grid.nx(), ny = grid.ny();
  for (std::size_t iy = 0; iy < ny; ++iy) {
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const bool in = grid.at(ix, iy).inside;
      const bool edge = (ix > 0 && grid.at(ix - 1, iy).inside != in) ||
                        (ix + 1 < nx && grid.at(ix + 1, iy).inside != in) ||
                        (iy > 0 && grid.at(ix, iy - 1).inside != in) ||
                        (iy + 1 < ny && grid.at(ix, iy + 1).inside != in);
      if (edge) out.push_back(iy * nx + ix);
    }
  }
  return out;
}

void write_grid_csv(std::ostream& out, const DesignSpaceGrid& grid) {
  out << "x_axis,y_axis,inside,margin_Y1,margin_Y2,margin_Y3,margin_Y4\n";
  for (std::size_t iy = 0; iy < grid.ny(); ++iy) {
    for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
      const auto& c = grid.at(ix, iy);
      out << text::sig6(grid.x_values[ix]) << ',' << text::sig6(grid.y_values[iy]) << ','
          << (c.inside ? 1 : 0);
      for (double m : c.margins) out << ',' << (std::isnan(m) ? std::string() : text::sig6(m));
      out << '\n';
    }
  }
}

}  // namespace chromdev::dspace
