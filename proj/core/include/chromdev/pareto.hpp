#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "chromdev/error.hpp"
#include "chromdev/process.hpp"
#include "chromdev/rsm.hpp"

namespace chromdev::pareto {

struct Bounds {
  double low = 0.0;
  double high = 0.0;
};

using ParamBounds = std::array<Bounds, kProcessParamCount>;

/// Bounds of the case-study factor ranges.
ParamBounds default_bounds();

/// Predicted response must be >= lower_bound.
struct Constraint {
  rsm::RegressionModel model;
  double lower_bound = 0.0;
};

/// Every objective is maximized. Material attributes are fixed per run.
struct OptimizationSpec {
  std::vector<rsm::RegressionModel> objectives;
  std::vector<Constraint> constraints;
  ParamBounds bounds{};
  MaterialAttributes attrs;

  void validate() const;
};

struct NsgaConfig {
  std::size_t population = 100;
  std::size_t generations = 100;
  std::uint64_t seed = 1;
  double sbx_eta = 15.0;
  double mutation_eta = 20.0;
  double mutation_prob = 1.0 / static_cast<double>(kProcessParamCount);
  double crossover_prob = 0.9;

  /// Population must be even and at least 4.
  void validate() const;
};

struct Evaluated {
  ProcessParams x;
  std::vector<double> objectives;
  std::vector<double> margins;  // predicted - lower_bound, one per constraint
  double violation = 0.0;       // sum of shortfalls, each scaled by |lower_bound|
  bool feasible = true;
};

Evaluated evaluate(const OptimizationSpec& spec, const ProcessParams& x);

/// Feasibility first, then smaller total violation, then Pareto dominance
/// (maximization) among feasible points.
bool constrained_dominates(const Evaluated& a, const Evaluated& b);

/// 1-based front rank per solution under constrained_dominates.
std::vector<std::size_t> fast_nondominated_sort(std::span<const Evaluated> population);

/// Groups indices by rank; fronts[0] holds rank 1.
std::vector<std::vector<std::size_t>> group_fronts(std::span<const std::size_t> ranks);

/// Crowding distance over objective vectors of one front. Boundary points of
/// every objective, and all points of fronts with <= 2 members, get +inf.
std::vector<double> crowding_distance(std::span<const std::vector<double>> objectives);

using Rng = std::mt19937_64;

/// Simulated binary crossover with one spread factor per coordinate (so
/// children preserve the parent mean), clipped to the bounds.
std::pair<ProcessParams, ProcessParams> sbx_crossover(const ProcessParams& p1,
                                                      const ProcessParams& p2,
                                                      const ParamBounds& bounds, double eta,
                                                      Rng& rng);

/// Polynomial mutation applied to each coordinate with probability `prob`.
ProcessParams polynomial_mutation(const ProcessParams& p, const ParamBounds& bounds, double eta,
                                  double prob, Rng& rng);

struct ParetoFront {
  std::vector<std::string> objective_names;
  std::vector<Evaluated> solutions;
};

/// Thrown when the final first front holds no feasible point; carries the
/// least-violating front.
class NoFeasibleSolution : public Error {
public:
  explicit NoFeasibleSolution(ParetoFront front);
  [[nodiscard]] const ParetoFront& front() const noexcept { return front_; }

private:
  ParetoFront front_;
};

/// NSGA-II: seeded uniform start, binary tournaments, SBX + polynomial
/// mutation, elitist (mu + lambda) survival. Returns the deduplicated
/// feasible first front.
ParetoFront optimize(const OptimizationSpec& spec, const NsgaConfig& config);

/// Down-selects to `count` solutions by repeatedly dropping the most crowded one.
ParetoFront select_diverse(const ParetoFront& front, std::size_t count);

/// CSV `X1..X6,<objective names>,feasible`.
void write_front_csv(std::ostream& out, const ParetoFront& front);

}  // namespace chromdev::pareto
