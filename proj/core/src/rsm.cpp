#include "chromdev/rsm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <Eigen/Dense>
#include <boost/math/distributions/students_t.hpp>

#include "chromdev/error.hpp"

namespace chromdev::rsm {

namespace {

// SS_res / SS_tot below this ratio is an exact interpolation; p-values of
// such fits are rounding noise and must not drive selection.
constexpr double kExactFitRatio = 1e-20;

int kind_rank(TermKind k) {
  switch (k) {
    case TermKind::intercept: return 0;
    case TermKind::main: return 1;
    case TermKind::quadratic: return 2;
    case TermKind::interaction: return 3;
    case TermKind::covariate: return 4;
  }
  return 5;
}

struct FitCore {
  Eigen::VectorXd beta;
  Eigen::VectorXd std_err;
  double ss_res = 0.0;
  double ss_tot = 0.0;
  std::size_t dof = 0;
};

Eigen::MatrixXd design_matrix(const Dataset& data, std::span<const Term> terms) {
  Eigen::MatrixXd a(static_cast<Eigen::Index>(data.rows.size()),
                    static_cast<Eigen::Index>(terms.size()));
  for (std::size_t r = 0; r < data.rows.size(); ++r) {
    for (std::size_t c = 0; c < terms.size(); ++c) {
      a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          terms[c].evaluate(data.rows[r].params, data.rows[r].attrs);
    }
  }
  return a;
}

Eigen::VectorXd response_vector(const Dataset& data) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(data.rows.size()));
  for (std::size_t r = 0; r < data.rows.size(); ++r) y(static_cast<Eigen::Index>(r)) = data.rows[r].response;
  return y;
}

FitCore fit_core(const Eigen::MatrixXd& a, const Eigen::VectorXd& y) {
  const auto n = static_cast<std::size_t>(a.rows());
  const auto p = static_cast<std::size_t>(a.cols());
  if (n <= p) {
    throw Error(Errc::insufficient_data, std::to_string(n) + " observations for " +
                                             std::to_string(p) + " terms");
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  qr.setThreshold(1e-10);
  if (static_cast<std::size_t>(qr.rank()) < p) {
    throw Error(Errc::rank_deficient, "design matrix rank " + std::to_string(qr.rank()) +
                                          " < " + std::to_string(p) + " terms");
  }
  FitCore fit;
  fit.beta = qr.solve(y);
  const Eigen::VectorXd resid = y - a * fit.beta;
  fit.ss_res = resid.squaredNorm();
  fit.ss_tot = (y.array() - y.mean()).matrix().squaredNorm();
  fit.dof = n - p;

  const auto pp = static_cast<Eigen::Index>(p);
  const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(pp, pp).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd r_inv =
      r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(pp, pp));
  const Eigen::MatrixXd cov_perm = r_inv * r_inv.transpose();
  const Eigen::MatrixXd cov = qr.colsPermutation() * cov_perm * qr.colsPermutation().transpose();
  const double s2 = fit.ss_res / static_cast<double>(fit.dof);
  fit.std_err = (cov.diagonal() * s2).cwiseMax(0.0).cwiseSqrt();
  return fit;
}

double two_sided_p(double beta, double se, std::size_t dof) {
  if (!(se > 0.0)) return beta == 0.0 ? 1.0 : 0.0;
  const boost::math::students_t dist(static_cast<double>(dof));
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(beta / se)));
}

bool is_exact(const FitCore& f) {
  return f.ss_res <= kExactFitRatio * f.ss_tot;
}

bool contains(const std::vector<Term>& terms, const Term& t) {
  return std::find(terms.begin(), terms.end(), t) != terms.end();
}

bool heredity_satisfied(const Term& t, const std::vector<Term>& active, Heredity h) {
  if (h == Heredity::none) return true;
  if (t.kind == TermKind::quadratic) return contains(active, Term::main(t.i));
  if (t.kind == TermKind::interaction) {
    const bool a = contains(active, Term::main(t.i));
    const bool b = contains(active, Term::main(t.j));
    return h == Heredity::strong ? (a && b) : (a || b);
  }
  return true;
}

bool removal_allowed(const Term& t, const std::vector<Term>& active, Heredity h) {
  if (t.kind == TermKind::intercept) return false;
  std::vector<Term> after;
  for (const auto& a : active)
    if (!(a == t)) after.push_back(a);
  return std::all_of(after.begin(), after.end(),
                     [&](const Term& a) { return heredity_satisfied(a, after, h); });
}

}  // namespace

Term Term::interaction(std::size_t i, std::size_t j) {
  if (!(i < j)) throw Error(Errc::invalid_argument, "interaction indices must satisfy i < j");
  return {TermKind::interaction, i, j};
}

double Term::evaluate(const ProcessParams& x, const MaterialAttributes& z) const {
  switch (kind) {
    case TermKind::intercept: return 1.0;
    case TermKind::main: return x[i];
    case TermKind::quadratic: return x[i] * x[i];
    case TermKind::interaction: return x[i] * x[j];
    case TermKind::covariate: return z.covariate(i);
  }
  return 0.0;
}

std::string Term::symbol() const {
  const auto xs = [](std::size_t k) { return "X" + std::to_string(k + 1); };
  switch (kind) {
    case TermKind::intercept: return "Intercept";
    case TermKind::main: return xs(i);
    case TermKind::quadratic: return xs(i) + "^2";
    case TermKind::interaction: return xs(i) + "*" + xs(j);
    case TermKind::covariate: return "Z" + std::to_string(i + 1);
  }
  return "?";
}

Term parse_term(std::string_view s) {
  auto index = [&](std::string_view digits) -> std::size_t {
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit)) {
      throw Error(Errc::parse_error, "malformed term '" + std::string(s) + "'");
    }
    const std::size_t k = std::stoul(std::string(digits));
    if (k == 0) throw Error(Errc::parse_error, "term indices start at 1: '" + std::string(s) + "'");
    return k - 1;
  };
  if (s == "Intercept") return Term::intercept();
  if (s.size() >= 2 && s[0] == 'Z') {
    const std::size_t k = index(s.substr(1));
    if (k >= kMaterialAttributeCount) throw Error(Errc::parse_error, "no covariate " + std::string(s));
    return Term::covariate(k);
  }
  if (s.size() >= 2 && s[0] == 'X') {
    std::size_t k;
    Term t;
    if (const auto star = s.find('*'); star != std::string_view::npos) {
      if (s[star + 1] != 'X') throw Error(Errc::parse_error, "malformed term '" + std::string(s) + "'");
      const std::size_t a = index(s.substr(1, star - 1));
      const std::size_t b = index(s.substr(star + 2));
      k = std::max(a, b);
      if (a >= b) throw Error(Errc::parse_error, "interaction indices must ascend: " + std::string(s));
      t = Term::interaction(a, b);
    } else if (s.size() > 2 && s.substr(s.size() - 2) == "^2") {
      k = index(s.substr(1, s.size() - 3));
      t = Term::quadratic(k);
    } else {
      k = index(s.substr(1));
      t = Term::main(k);
    }
    if (k >= kProcessParamCount) throw Error(Errc::parse_error, "no factor in " + std::string(s));
    return t;
  }
  throw Error(Errc::parse_error, "malformed term '" + std::string(s) + "'");
}

bool canonical_less(const Term& a, const Term& b) {
  const int ka = kind_rank(a.kind), kb = kind_rank(b.kind);
  if (ka != kb) return ka < kb;
  if (a.i != b.i) return a.i < b.i;
  return a.j < b.j;
}

std::vector<Term> candidate_terms(std::size_t n_factors, std::size_t n_covariates) {
  if (n_factors == 0) throw Error(Errc::invalid_argument, "at least one factor is required");
  std::vector<Term> out{Term::intercept()};
  for (std::size_t i = 0; i < n_factors; ++i) out.push_back(Term::main(i));
  for (std::size_t i = 0; i < n_factors; ++i) out.push_back(Term::quadratic(i));
  for (std::size_t i = 0; i < n_factors; ++i)
    for (std::size_t j = i + 1; j < n_factors; ++j) out.push_back(Term::interaction(i, j));
  for (std::size_t k = 0; k < n_covariates; ++k) out.push_back(Term::covariate(k));
  return out;
}

double RegressionModel::coefficient(const Term& term) const {
  for (std::size_t c = 0; c < terms.size(); ++c)
    if (terms[c] == term) return coefficients[c];
  return 0.0;
}

double predict(const RegressionModel& model, const ProcessParams& params,
               const MaterialAttributes& attrs) {
  double y = 0.0;
  for (std::size_t c = 0; c < model.terms.size(); ++c) {
    y += model.coefficients[c] * model.terms[c].evaluate(params, attrs);
  }
  return y;
}

RegressionModel fit_least_squares(const Dataset& data, std::span<const Term> terms) {
  if (terms.empty()) throw Error(Errc::invalid_argument, "no terms to fit");
  const FitCore fit = fit_core(design_matrix(data, terms), response_vector(data));

  RegressionModel model;
  model.response_name = data.response_name;
  model.terms.assign(terms.begin(), terms.end());
  model.n_observations = data.rows.size();
  for (std::size_t c = 0; c < terms.size(); ++c) {
    const auto ci = static_cast<Eigen::Index>(c);
    model.coefficients.push_back(fit.beta(ci));
    model.p_values.push_back(two_sided_p(fit.beta(ci), fit.std_err(ci), fit.dof));
  }
  model.r_squared = fit.ss_tot > 0.0 ? std::clamp(1.0 - fit.ss_res / fit.ss_tot, 0.0, 1.0) : 0.0;
  model.residual_sd = std::sqrt(fit.ss_res / static_cast<double>(fit.dof));
  return model;
}

std::string_view to_string(Heredity h) noexcept {
  switch (h) {
    case Heredity::none: return "none";
    case Heredity::weak: return "weak";
    case Heredity::strong: return "strong";
  }
  return "none";
}

Heredity parse_heredity(std::string_view text) {
  for (Heredity h : {Heredity::none, Heredity::weak, Heredity::strong}) {
    if (to_string(h) == text) return h;
  }
  throw Error(Errc::invalid_argument, "unknown heredity mode '" + std::string(text) + "'");
}

std::vector<Term> stepwise_select(const Dataset& data, std::span<const Term> candidates,
                                  const StepwiseOptions& options) {
  if (options.p_enter > options.p_remove) {
    throw Error(Errc::invalid_argument, "p_enter must not exceed p_remove");
  }
  std::vector<Term> pool(candidates.begin(), candidates.end());
  std::sort(pool.begin(), pool.end(), canonical_less);
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  if (!contains(pool, Term::intercept())) {
    throw Error(Errc::invalid_argument, "candidate pool must contain the intercept");
  }

  const Eigen::VectorXd y = response_vector(data);
  const std::size_t n = data.rows.size();
  if (n < 1 + options.min_residual_dof) {
    throw Error(Errc::insufficient_data, "too few observations for stepwise selection");
  }
  // Columns are evaluated once; subsets are gathered per trial fit.
  const Eigen::MatrixXd full = design_matrix(data, pool);
  auto column_of = [&](const Term& t) {
    return static_cast<Eigen::Index>(std::find(pool.begin(), pool.end(), t) - pool.begin());
  };
  auto fit_terms = [&](const std::vector<Term>& terms) {
    Eigen::MatrixXd a(full.rows(), static_cast<Eigen::Index>(terms.size()));
    for (std::size_t c = 0; c < terms.size(); ++c) a.col(static_cast<Eigen::Index>(c)) = full.col(column_of(terms[c]));
    return fit_core(a, y);
  };

  std::vector<Term> active{Term::intercept()};
  std::set<std::vector<std::size_t>> visited;
  const std::size_t max_rounds = 4 * pool.size() + 8;

  for (std::size_t round = 0; round < max_rounds; ++round) {
    bool changed = false;

    // Forward: the eligible candidate with the smallest p-value below p_enter.
    FitCore current = fit_terms(active);
    if (!is_exact(current) && n >= active.size() + 1 + options.min_residual_dof) {
      const Term* best = nullptr;
      double best_p = options.p_enter;
      for (const Term& c : pool) {
        if (contains(active, c) || !heredity_satisfied(c, active, options.heredity)) continue;
        std::vector<Term> trial = active;
        trial.push_back(c);
        try {
          const FitCore f = fit_terms(trial);
          const auto last = static_cast<Eigen::Index>(trial.size() - 1);
          const double p = two_sided_p(f.beta(last), f.std_err(last), f.dof);
          if (p < best_p) {
            best_p = p;
            best = &c;
          }
        } catch (const Error& e) {
          if (e.code() != Errc::rank_deficient) throw;
        }
      }
      if (best != nullptr) {
        active.push_back(*best);
        changed = true;
      }
    }

    // Backward: drop terms until every removable term is significant.
    while (active.size() > 1) {
      current = fit_terms(active);
      std::ptrdiff_t drop = -1;
      if (is_exact(current)) {
        // Remove the latest canonical term whose absence keeps the fit exact.
        for (std::size_t c = active.size(); c-- > 1;) {
          if (!removal_allowed(active[c], active, options.heredity)) continue;
          std::vector<Term> trial = active;
          trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(c));
          if (is_exact(fit_terms(trial)) &&
              (drop < 0 || canonical_less(active[static_cast<std::size_t>(drop)], active[c]))) {
            drop = static_cast<std::ptrdiff_t>(c);
          }
        }
      } else {
        double worst_p = options.p_remove;
        for (std::size_t c = 1; c < active.size(); ++c) {
          if (!removal_allowed(active[c], active, options.heredity)) continue;
          const auto ci = static_cast<Eigen::Index>(c);
          const double p = two_sided_p(current.beta(ci), current.std_err(ci), current.dof);
          const bool later_tie =
              p == worst_p && drop >= 0 && canonical_less(active[static_cast<std::size_t>(drop)], active[c]);
          if (p > worst_p || later_tie) {
            worst_p = p;
            drop = static_cast<std::ptrdiff_t>(c);
          }
        }
      }
      if (drop < 0) break;
      active.erase(active.begin() + drop);
      changed = true;
    }

    if (!changed) break;
    std::vector<std::size_t> state;
    for (const auto& t : active) state.push_back(static_cast<std::size_t>(column_of(t)));
    std::sort(state.begin(), state.end());
    if (!visited.insert(state).second) break;  // revisited a model: stop
  }

  std::sort(active.begin(), active.end(), canonical_less);
  return active;
}

DiagnosticsReport diagnostics(const RegressionModel& model, const Dataset& data) {
  DiagnosticsReport report;
  double mean = 0.0;
  for (const auto& row : data.rows) mean += row.response;
  if (!data.rows.empty()) mean /= static_cast<double>(data.rows.size());

  double ss_res = 0.0, ss_tot = 0.0;
  for (const auto& row : data.rows) {
    const double pred = predict(model, row.params, row.attrs);
    report.rows.push_back({row.response, pred, row.response - pred});
    ss_res += (row.response - pred) * (row.response - pred);
    ss_tot += (row.response - mean) * (row.response - mean);
  }
  report.r_squared = ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 0.0;
  const std::size_t p = model.terms.size();
  report.residual_sd = data.rows.size() > p
                           ? std::sqrt(ss_res / static_cast<double>(data.rows.size() - p))
                           : 0.0;
  return report;
}

}  // namespace chromdev::rsm
