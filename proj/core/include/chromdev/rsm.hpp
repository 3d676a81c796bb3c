#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chromdev/process.hpp"

namespace chromdev::rsm {

enum class TermKind { intercept, main, quadratic, interaction, covariate };

/// One column of the second-order model with covariates. Indices are
/// zero-based (main(0) is X1, covariate(0) is Z1).
struct Term {
  TermKind kind = TermKind::intercept;
  std::size_t i = 0;
  std::size_t j = 0;

  static constexpr Term intercept() { return {TermKind::intercept, 0, 0}; }
  static constexpr Term main(std::size_t i) { return {TermKind::main, i, 0}; }
  static constexpr Term quadratic(std::size_t i) { return {TermKind::quadratic, i, 0}; }
  /// Throws InvalidArgument unless i < j.
  static Term interaction(std::size_t i, std::size_t j);
  static constexpr Term covariate(std::size_t k) { return {TermKind::covariate, k, 0}; }

  [[nodiscard]] double evaluate(const ProcessParams& x, const MaterialAttributes& z) const;

  /// "Intercept", "X1", "X4^2", "X1*X5", "Z1".
  [[nodiscard]] std::string symbol() const;

  friend bool operator==(const Term&, const Term&) = default;
};

Term parse_term(std::string_view symbol);

/// Canonical order: intercept, mains, quadratics, interactions
/// (lexicographic), covariates.
bool canonical_less(const Term& a, const Term& b);

/// Full candidate pool: intercept, n mains, n quadratics, C(n,2)
/// interactions, m covariates, in canonical order.
std::vector<Term> candidate_terms(std::size_t n_factors, std::size_t n_covariates);

struct Observation {
  ProcessParams params;
  MaterialAttributes attrs;
  double response = 0.0;
};

struct Dataset {
  std::string response_name;
  std::vector<Observation> rows;
};

struct RegressionModel {
  std::string response_name;
  std::vector<Term> terms;
  std::vector<double> coefficients;  // natural units, one per term
  std::vector<double> p_values;      // two-sided t-test; NaN when unknown
  double r_squared = 0.0;
  double residual_sd = 0.0;
  std::size_t n_observations = 0;

  [[nodiscard]] double coefficient(const Term& term) const;  // 0 when absent
};

/// Sum of coefficient x term value.
[[nodiscard]] double predict(const RegressionModel& model, const ProcessParams& params,
                             const MaterialAttributes& attrs);

/// Ordinary least squares on natural-unit columns. Throws RankDeficient when
/// the design matrix lacks full column rank and InsufficientData when no
/// residual degree of freedom remains.
RegressionModel fit_least_squares(const Dataset& data, std::span<const Term> terms);

enum class Heredity {
  none,    // any candidate may enter at any time
  weak,    // interactions need one parent main effect, quadratics their main effect
  strong,  // interactions need both parents
};

std::string_view to_string(Heredity h) noexcept;
Heredity parse_heredity(std::string_view text);

struct StepwiseOptions {
  double p_enter = 0.05;
  double p_remove = 0.05;
  Heredity heredity = Heredity::none;
  /// Residual degrees of freedom the selected model must keep.
  std::size_t min_residual_dof = 2;
};

/// Bidirectional stepwise selection on partial-F (equivalently single-term t)
/// p-values. Returns the selected terms in canonical order; the intercept is
/// always kept.
std::vector<Term> stepwise_select(const Dataset& data, std::span<const Term> candidates,
                                  const StepwiseOptions& options = {});

struct ResidualRow {
  double observed = 0.0;
  double predicted = 0.0;
  double residual = 0.0;
};

struct DiagnosticsReport {
  std::vector<ResidualRow> rows;
  double r_squared = 0.0;
  double residual_sd = 0.0;
};

DiagnosticsReport diagnostics(const RegressionModel& model, const Dataset& data);

/// Line-oriented model document: response name, R^2, residual sd and one
/// `symbol coefficient p_value` line per term, 6 significant digits.
void write_model_text(std::ostream& out, const RegressionModel& model);
RegressionModel read_model_text(std::istream& in);

}  // namespace chromdev::rsm
