#include "chromdev/doe.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "chromdev/error.hpp"

namespace chromdev::doe {

namespace {

DesignRow make_row(std::span<const FactorSpec> factors, std::vector<double> coded, RowRole role) {
  DesignRow row;
  row.natural.reserve(coded.size());
  for (std::size_t j = 0; j < coded.size(); ++j) {
    row.natural.push_back(factors[j].decode(coded[j]));
    if (std::abs(coded[j]) > 1.0 + 1e-12) row.out_of_bounds = true;
  }
  row.coded = std::move(coded);
  row.role = role;
  return row;
}

void validate_factors(std::span<const FactorSpec> factors) {
  for (const auto& f : factors) f.validate();
}

void append_centers(DesignTable& table, std::size_t count) {
  const std::vector<double> zeros(table.factors.size(), 0.0);
  for (std::size_t i = 0; i < count; ++i) {
    table.rows.push_back(make_row(table.factors, zeros, RowRole::center));
  }
}

bool near_zero(double v) { return std::abs(v) < 1e-9; }

}  // namespace

void FactorSpec::validate() const {
  if (!std::isfinite(low) || !std::isfinite(high) || !(low < high)) {
    throw Error(Errc::invalid_argument, "factor '" + name + "' requires low < high");
  }
}

std::vector<FactorSpec> default_factors() {
  return {
      {"feed_flow", 0.5, 1.5, "BV/h"},    {"feed_time", 1.0, 2.0, "h"},
      {"wash_flow", 1.5, 2.5, "BV/h"},    {"wash_time", 0.5, 1.5, "h"},
      {"elution_flow", 2.5, 3.5, "BV/h"}, {"elution_time", 0.5, 1.5, "h"},
  };
}

std::string_view to_string(RowRole role) noexcept {
  switch (role) {
    case RowRole::foldover: return "foldover";
    case RowRole::center: return "center";
    case RowRole::edge: return "edge";
    case RowRole::corner: return "corner";
    case RowRole::axial: return "axial";
  }
  return "center";
}

RowRole parse_row_role(std::string_view text) {
  for (RowRole r : {RowRole::foldover, RowRole::center, RowRole::edge, RowRole::corner,
                    RowRole::axial}) {
    if (to_string(r) == text) return r;
  }
  throw Error(Errc::parse_error, "unknown row role '" + std::string(text) + "'");
}

ProcessParams DesignRow::params() const {
  if (natural.size() != kProcessParamCount) {
    throw Error(Errc::invalid_argument, "design row does not have six process parameters");
  }
  ProcessParams p;
  std::copy(natural.begin(), natural.end(), p.values.begin());
  return p;
}

bool DesignTable::has_batches() const {
  return std::any_of(rows.begin(), rows.end(),
                     [](const DesignRow& r) { return r.batch_id.has_value(); });
}

DesignTable generate_dsd(std::span<const FactorSpec> factors, const DsdOptions& options) {
  validate_factors(factors);
  const std::size_t k = factors.size();
  const ConferenceMatrix c = conference_matrix(k + options.n_dummy);

  DesignTable table;
  table.factors.assign(factors.begin(), factors.end());
  table.dummy_count = options.n_dummy;
  table.seed = options.seed;
  table.kind = DesignKind::definitive_screening;

  for (std::size_t i = 0; i < c.order(); ++i) {
    std::vector<double> plus(k), minus(k);
    for (std::size_t j = 0; j < k; ++j) {
      plus[j] = c(i, j);
      minus[j] = -c(i, j);
    }
    table.rows.push_back(make_row(factors, std::move(plus), RowRole::foldover));
    table.rows.push_back(make_row(factors, std::move(minus), RowRole::foldover));
  }
  append_centers(table, 1 + options.n_extra_center);

  if (options.shuffle_run_order) return shuffle_run_order(table, options.seed);
  return table;
}

DesignTable generate_bbd(std::span<const FactorSpec> factors, std::size_t n_center) {
  const std::size_t k = factors.size();
  if (k < 3 || k > 7) {
    throw Error(Errc::unsupported_factor_count,
                "Box-Behnken designs support 3..7 factors, got " + std::to_string(k));
  }
  validate_factors(factors);

  // Published incomplete-block structures: every pair for k <= 5, the
  // three-factor blocks of the original tables for k = 6 and 7.
  std::vector<std::vector<std::size_t>> blocks;
  if (k <= 5) {
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j) blocks.push_back({i, j});
  } else if (k == 6) {
    blocks = {{0, 1, 3}, {1, 2, 4}, {2, 3, 5}, {0, 3, 4}, {1, 4, 5}, {0, 2, 5}};
  } else {
    blocks = {{3, 4, 5}, {0, 5, 6}, {1, 4, 6}, {0, 1, 3}, {2, 3, 6}, {0, 2, 4}, {1, 2, 5}};
  }

  DesignTable table;
  table.factors.assign(factors.begin(), factors.end());
  table.kind = DesignKind::box_behnken;
  for (const auto& block : blocks) {
    const std::size_t combos = std::size_t{1} << block.size();
    for (std::size_t c = 0; c < combos; ++c) {
      std::vector<double> coded(k, 0.0);
      for (std::size_t b = 0; b < block.size(); ++b) {
        coded[block[b]] = ((c >> b) & 1U) ? 1.0 : -1.0;
      }
      table.rows.push_back(make_row(factors, std::move(coded), RowRole::edge));
    }
  }
  append_centers(table, n_center);
  return table;
}

double ccd_alpha(std::size_t n_factors, AlphaMode mode) {
  if (mode == AlphaMode::face_centered) return 1.0;
  return std::pow(std::ldexp(1.0, static_cast<int>(n_factors)), 0.25);
}

DesignTable generate_ccd(std::span<const FactorSpec> factors, AlphaMode mode,
                         std::size_t n_center) {
  const std::size_t k = factors.size();
  if (k < 2 || k > 6) {
    throw Error(Errc::unsupported_factor_count,
                "central composite designs support 2..6 factors, got " + std::to_string(k));
  }
  validate_factors(factors);
  const double alpha = ccd_alpha(k, mode);

  DesignTable table;
  table.factors.assign(factors.begin(), factors.end());
  table.kind = DesignKind::central_composite;
  for (std::size_t c = 0; c < (std::size_t{1} << k); ++c) {
    std::vector<double> coded(k);
    for (std::size_t j = 0; j < k; ++j) coded[j] = ((c >> j) & 1U) ? 1.0 : -1.0;
    table.rows.push_back(make_row(factors, std::move(coded), RowRole::corner));
  }
  for (std::size_t j = 0; j < k; ++j) {
    for (double sign : {-1.0, 1.0}) {
      std::vector<double> coded(k, 0.0);
      coded[j] = sign * alpha;
      table.rows.push_back(make_row(factors, std::move(coded), RowRole::axial));
    }
  }
  append_centers(table, n_center);
  return table;
}

DesignTable allocate_batches(const DesignTable& design, std::span<const std::string> batches,
                             std::uint64_t seed) {
  if (batches.empty()) throw Error(Errc::invalid_argument, "at least one batch is required");
  if (design.has_batches()) {
    throw Error(Errc::already_allocated, "design table already carries batch assignments");
  }
  std::mt19937_64 rng(seed);
  const std::size_t n = design.rows.size();
  const std::size_t b = batches.size();

  // Which batches receive the remainder rows is itself part of the draw.
  std::vector<std::string> order(batches.begin(), batches.end());
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::string> pool;
  pool.reserve(n);
  for (std::size_t i = 0; i < b; ++i) {
    const std::size_t count = n / b + (i < n % b ? 1 : 0);
    pool.insert(pool.end(), count, order[i]);
  }
  std::shuffle(pool.begin(), pool.end(), rng);

  DesignTable out = design;
  for (std::size_t i = 0; i < n; ++i) out.rows[i].batch_id = pool[i];
  return out;
}

DesignTable shuffle_run_order(const DesignTable& design, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  DesignTable out = design;
  std::shuffle(out.rows.begin(), out.rows.end(), rng);
  return out;
}

VerificationReport verify_dsd(const DesignTable& design) {
  VerificationReport report;
  const std::size_t k = design.factors.size();
  auto add = [&](std::string name, bool passed, std::string detail) {
    report.checks.push_back({std::move(name), passed, std::move(detail)});
  };

  std::size_t n_fold = 0;
  while (n_fold < design.rows.size() && design.rows[n_fold].role == RowRole::foldover) ++n_fold;
  bool layout_ok = n_fold % 2 == 0 && n_fold > 0;
  std::size_t n_center = 0;
  for (std::size_t r = n_fold; r < design.rows.size(); ++r) {
    const auto& row = design.rows[r];
    const bool zero = std::all_of(row.coded.begin(), row.coded.end(), near_zero);
    if (row.role != RowRole::center || !zero) layout_ok = false;
    ++n_center;
  }
  for (const auto& row : design.rows) {
    if (row.coded.size() != k) layout_ok = false;
  }
  add("layout", layout_ok && n_center >= 1,
      std::to_string(n_fold) + " fold-over rows followed by " + std::to_string(n_center) +
          " all-zero center rows");
  if (!layout_ok) {
    report.ok = false;
    return report;
  }

  // Fold-over pairing: rows 2i and 2i+1 cancel in coded units.
  std::string pair_detail;
  bool pairs_ok = true;
  for (std::size_t p = 0; p + 1 < n_fold; p += 2) {
    for (std::size_t j = 0; j < k; ++j) {
      if (!near_zero(design.rows[p].coded[j] + design.rows[p + 1].coded[j])) {
        pairs_ok = false;
        if (pair_detail.empty()) {
          pair_detail = "rows " + std::to_string(p + 1) + " and " + std::to_string(p + 2) +
                        " do not cancel in column X" + std::to_string(j + 1);
        }
      }
    }
  }
  add("foldover_pairs", pairs_ok, pairs_ok ? "all pairs sum to the center" : pair_detail);

  // One zero per row of the full conference matrix: every visible column has
  // its two zeros in one pair, and rows without a visible zero are exactly the
  // rows whose zero sits in a dummy column.
  bool zeros_ok = true;
  std::string zero_detail;
  std::size_t no_zero_rows = 0;
  for (std::size_t r = 0; r < n_fold; ++r) {
    const auto& c = design.rows[r].coded;
    const auto zeros = std::count_if(c.begin(), c.end(), near_zero);
    const auto units = std::count_if(c.begin(), c.end(),
                                     [](double v) { return std::abs(std::abs(v) - 1.0) < 1e-9; });
    if (zeros + units != static_cast<long>(k) || zeros > 1) {
      zeros_ok = false;
      if (zero_detail.empty()) zero_detail = "row " + std::to_string(r + 1) + " is not +-1 with one zero";
    }
    if (zeros == 0) ++no_zero_rows;
  }
  for (std::size_t j = 0; j < k && zeros_ok; ++j) {
    std::vector<std::size_t> at;
    for (std::size_t r = 0; r < n_fold; ++r)
      if (near_zero(design.rows[r].coded[j])) at.push_back(r);
    if (at.size() != 2 || at[0] / 2 != at[1] / 2) {
      zeros_ok = false;
      zero_detail = "column X" + std::to_string(j + 1) + " does not hold exactly one zero pair";
    }
  }
  if (zeros_ok && no_zero_rows != 2 * design.dummy_count) {
    zeros_ok = false;
    zero_detail = std::to_string(no_zero_rows) + " rows lack a visible zero but dummy_count is " +
                  std::to_string(design.dummy_count);
  }
  add("one_zero_per_row", zeros_ok, zeros_ok ? "conference structure intact" : zero_detail);

  // Main effects mutually orthogonal, and orthogonal to every pure quadratic.
  bool main_ok = true;
  bool quad_ok = true;
  std::string main_detail, quad_detail;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      double dot = 0.0, dq = 0.0;
      for (const auto& row : design.rows) {
        dot += row.coded[a] * row.coded[b];
        dq += row.coded[a] * row.coded[b] * row.coded[b];
      }
      if (a < b && !near_zero(dot)) {
        main_ok = false;
        if (main_detail.empty())
          main_detail = "X" + std::to_string(a + 1) + " . X" + std::to_string(b + 1) + " = " +
                        std::to_string(dot);
      }
      if (!near_zero(dq)) {
        quad_ok = false;
        if (quad_detail.empty())
          quad_detail = "X" + std::to_string(a + 1) + " . X" + std::to_string(b + 1) + "^2 = " +
                        std::to_string(dq);
      }
    }
  }
  add("main_effect_orthogonality", main_ok, main_ok ? "all dot products zero" : main_detail);
  add("main_vs_quadratic_orthogonality", quad_ok, quad_ok ? "all dot products zero" : quad_detail);

  report.ok = std::all_of(report.checks.begin(), report.checks.end(),
                          [](const CheckResult& c) { return c.passed; });
  return report;
}

bool equivalent_up_to_permutation(const DesignTable& a, const DesignTable& b, double tolerance) {
  const std::size_t k = a.factors.size();
  if (k != b.factors.size() || a.rows.size() != b.rows.size() || k > 20) return false;

  auto key = [tolerance](double v) { return std::llround(v / tolerance); };
  auto sorted_keys = [&](const DesignTable& t, std::uint32_t flips) {
    std::vector<std::vector<long long>> rows;
    rows.reserve(t.rows.size());
    for (const auto& row : t.rows) {
      std::vector<long long> r(k);
      for (std::size_t j = 0; j < k; ++j) {
        const double sign = ((flips >> j) & 1U) ? -1.0 : 1.0;
        r[j] = key(sign * row.coded[j]);
      }
      rows.push_back(std::move(r));
    }
    std::sort(rows.begin(), rows.end());
    return rows;
  };

  const auto target = sorted_keys(b, 0);
  for (std::uint32_t flips = 0; flips < (1U << k); ++flips) {
    if (sorted_keys(a, flips) == target) return true;
  }
  return false;
}

}  // namespace chromdev::doe
