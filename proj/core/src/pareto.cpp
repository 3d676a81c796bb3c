#include "chromdev/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace chromdev::pareto {

namespace {

double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

bool pareto_dominates(const std::vector<double>& a, const std::vector<double>& b) {
  bool strictly = false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] < b[k]) return false;
    if (a[k] > b[k]) strictly = true;
  }
  return strictly;
}

// Order in which every dominator precedes the solutions it dominates.
bool sort_precedes(const Evaluated& a, const Evaluated& b) {
  if (a.feasible != b.feasible) return a.feasible;
  if (!a.feasible && a.violation != b.violation) return a.violation < b.violation;
  return std::lexicographical_compare(a.objectives.begin(), a.objectives.end(),
                                      b.objectives.begin(), b.objectives.end(),
                                      std::greater<>());
}

bool near_duplicate(const ProcessParams& a, const ProcessParams& b, const ParamBounds& bounds) {
  for (std::size_t j = 0; j < kProcessParamCount; ++j) {
    if (std::abs(a[j] - b[j]) > 1e-6 * (bounds[j].high - bounds[j].low)) return false;
  }
  return true;
}

ParetoFront make_front(const OptimizationSpec& spec, std::vector<Evaluated> solutions) {
  std::stable_sort(solutions.begin(), solutions.end(), [](const Evaluated& a, const Evaluated& b) {
    return std::lexicographical_compare(a.objectives.begin(), a.objectives.end(),
                                        b.objectives.begin(), b.objectives.end(),
                                        std::greater<>());
  });
  ParetoFront front;
  for (const auto& m : spec.objectives) front.objective_names.push_back(m.response_name);
  for (auto& s : solutions) {
    const bool dup = std::any_of(front.solutions.begin(), front.solutions.end(),
                                 [&](const Evaluated& t) { return near_duplicate(s.x, t.x, spec.bounds); });
    if (!dup) front.solutions.push_back(std::move(s));
  }
  return front;
}

}  // namespace

ParamBounds default_bounds() {
  return {{{0.5, 1.5}, {1.0, 2.0}, {1.5, 2.5}, {0.5, 1.5}, {2.5, 3.5}, {0.5, 1.5}}};
}

void OptimizationSpec::validate() const {
  if (objectives.empty()) throw Error(Errc::invalid_argument, "at least one objective is required");
  for (const auto& b : bounds) {
    if (!(b.low < b.high)) throw Error(Errc::invalid_argument, "bounds require low < high");
  }
}

void NsgaConfig::validate() const {
  if (population < 4 || population % 2 != 0) {
    throw Error(Errc::invalid_argument, "population must be even and >= 4");
  }
  if (!(sbx_eta >= 0.0) || !(mutation_eta >= 0.0)) {
    throw Error(Errc::invalid_argument, "distribution indices must be non-negative");
  }
  auto prob_ok = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!prob_ok(mutation_prob) || !prob_ok(crossover_prob)) {
    throw Error(Errc::invalid_argument, "probabilities must lie in [0, 1]");
  }
}

NoFeasibleSolution::NoFeasibleSolution(ParetoFront front)
    : Error(Errc::no_feasible_solution, "no feasible point satisfies every constraint"),
      front_(std::move(front)) {}

Evaluated evaluate(const OptimizationSpec& spec, const ProcessParams& x) {
  Evaluated e;
  e.x = x;
  e.objectives.reserve(spec.objectives.size());
  for (const auto& m : spec.objectives) e.objectives.push_back(rsm::predict(m, x, spec.attrs));
  e.margins.reserve(spec.constraints.size());
  for (const auto& c : spec.constraints) {
    const double margin = rsm::predict(c.model, x, spec.attrs) - c.lower_bound;
    e.margins.push_back(margin);
    if (margin < 0.0) {
      const double scale = c.lower_bound != 0.0 ? std::abs(c.lower_bound) : 1.0;
      e.violation += -margin / scale;
    }
  }
  e.feasible = e.violation == 0.0;
  return e;
}

bool constrained_dominates(const Evaluated& a, const Evaluated& b) {
  if (a.feasible && !b.feasible) return true;
  if (!a.feasible && b.feasible) return false;
  if (!a.feasible) return a.violation < b.violation;
  return pareto_dominates(a.objectives, b.objectives);
}

std::vector<std::size_t> fast_nondominated_sort(std::span<const Evaluated> population) {
  // Efficient non-dominated sort (sequential search): after sorting so that
  // dominators come first, each solution joins the first front holding none
  // of its dominators.
  std::vector<std::size_t> order(population.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return sort_precedes(population[a], population[b]);
  });

  std::vector<std::vector<std::size_t>> fronts;
  std::vector<std::size_t> rank(population.size(), 0);
  for (std::size_t idx : order) {
    const Evaluated& s = population[idx];
    std::size_t k = 0;
    for (; k < fronts.size(); ++k) {
      const auto& f = fronts[k];
      bool dominated = false;
      for (auto it = f.rbegin(); it != f.rend(); ++it) {
        if (constrained_dominates(population[*it], s)) {
          dominated = true;
          break;
        }
      }
      if (!dominated) break;
    }
    if (k == fronts.size()) fronts.emplace_back();
    fronts[k].push_back(idx);
    rank[idx] = k + 1;
  }
  return rank;
}

std::vector<std::vector<std::size_t>> group_fronts(std::span<const std::size_t> ranks) {
  std::vector<std::vector<std::size_t>> fronts;
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    if (ranks[i] == 0) continue;
    if (fronts.size() < ranks[i]) fronts.resize(ranks[i]);
    fronts[ranks[i] - 1].push_back(i);
  }
  return fronts;
}

std::vector<double> crowding_distance(std::span<const std::vector<double>> objectives) {
  const std::size_t n = objectives.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, 0.0);
  if (n <= 2) {
    std::fill(dist.begin(), dist.end(), inf);
    return dist;
  }
  const std::size_t m = objectives.front().size();
  std::vector<std::size_t> idx(n);
  for (std::size_t k = 0; k < m; ++k) {
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return objectives[a][k] < objectives[b][k];
    });
    const double lo = objectives[idx.front()][k];
    const double hi = objectives[idx.back()][k];
    dist[idx.front()] = inf;
    dist[idx.back()] = inf;
    if (!(hi > lo)) continue;
    for (std::size_t r = 1; r + 1 < n; ++r) {
      if (dist[idx[r]] == inf) continue;
      dist[idx[r]] += (objectives[idx[r + 1]][k] - objectives[idx[r - 1]][k]) / (hi - lo);
    }
  }
  return dist;
}

std::pair<ProcessParams, ProcessParams> sbx_crossover(const ProcessParams& p1,
                                                      const ProcessParams& p2,
                                                      const ParamBounds& bounds, double eta,
                                                      Rng& rng) {
  ProcessParams c1 = p1, c2 = p2;
  const double exponent = 1.0 / (eta + 1.0);
  for (std::size_t j = 0; j < kProcessParamCount; ++j) {
    // Each coordinate takes part with probability one half; the two uniform
    // draws happen regardless so the stream layout is fixed.
    const bool cross = uniform01(rng) <= 0.5;
    const double u = uniform01(rng);
    if (!cross || std::abs(p1[j] - p2[j]) <= 1e-14) continue;
    const double beta = u <= 0.5 ? std::pow(2.0 * u, exponent)
                                  : std::pow(1.0 / (2.0 * (1.0 - u)), exponent);
    const double a = 0.5 * ((1.0 + beta) * p1[j] + (1.0 - beta) * p2[j]);
    const double b = 0.5 * ((1.0 - beta) * p1[j] + (1.0 + beta) * p2[j]);
    c1[j] = std::clamp(a, bounds[j].low, bounds[j].high);
    c2[j] = std::clamp(b, bounds[j].low, bounds[j].high);
  }
  return {c1, c2};
}

ProcessParams polynomial_mutation(const ProcessParams& p, const ParamBounds& bounds, double eta,
                                  double prob, Rng& rng) {
  ProcessParams out = p;
  const double power = 1.0 / (eta + 1.0);
  for (std::size_t j = 0; j < kProcessParamCount; ++j) {
    const bool mutate = uniform01(rng) < prob;
    const double u = uniform01(rng);
    if (!mutate) continue;
    const double lo = bounds[j].low, hi = bounds[j].high, range = hi - lo;
    const double y = out[j];
    const double d1 = (y - lo) / range;
    const double d2 = (hi - y) / range;
    double dq;
    if (u <= 0.5) {
      const double val = 2.0 * u + (1.0 - 2.0 * u) * std::pow(1.0 - d1, eta + 1.0);
      dq = std::pow(val, power) - 1.0;
    } else {
      const double val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(1.0 - d2, eta + 1.0);
      dq = 1.0 - std::pow(val, power);
    }
    out[j] = std::clamp(y + dq * range, lo, hi);
  }
  return out;
}

ParetoFront optimize(const OptimizationSpec& spec, const NsgaConfig& config) {
  spec.validate();
  config.validate();
  Rng rng(config.seed);
  const std::size_t n = config.population;

  std::vector<Evaluated> pop;
  pop.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    ProcessParams x;
    for (std::size_t j = 0; j < kProcessParamCount; ++j) {
      x[j] = spec.bounds[j].low + uniform01(rng) * (spec.bounds[j].high - spec.bounds[j].low);
    }
    pop.push_back(evaluate(spec, x));
  }

  std::vector<std::size_t> rank = fast_nondominated_sort(pop);
  std::vector<double> crowd(n, 0.0);
  auto assign_crowding = [](const std::vector<Evaluated>& p, const std::vector<std::size_t>& front,
                            std::vector<double>& out) {
    std::vector<std::vector<double>> objs;
    objs.reserve(front.size());
    for (std::size_t i : front) objs.push_back(p[i].objectives);
    const auto d = crowding_distance(objs);
    for (std::size_t r = 0; r < front.size(); ++r) out[front[r]] = d[r];
  };
  for (const auto& f : group_fronts(rank)) assign_crowding(pop, f, crowd);

  auto tournament = [&]() -> std::size_t {
    const std::size_t a = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    const std::size_t b = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    const double coin = uniform01(rng);
    if (constrained_dominates(pop[a], pop[b])) return a;
    if (constrained_dominates(pop[b], pop[a])) return b;
    if (crowd[a] > crowd[b]) return a;
    if (crowd[b] > crowd[a]) return b;
    return coin < 0.5 ? a : b;
  };

  for (std::size_t gen = 0; gen < config.generations; ++gen) {
    std::vector<ProcessParams> children;
    children.reserve(n);
    while (children.size() < n) {
      const ProcessParams& p1 = pop[tournament()].x;
      const ProcessParams& p2 = pop[tournament()].x;
      ProcessParams c1 = p1, c2 = p2;
      if (uniform01(rng) < config.crossover_prob) {
        std::tie(c1, c2) = sbx_crossover(p1, p2, spec.bounds, config.sbx_eta, rng);
      }
      children.push_back(polynomial_mutation(c1, spec.bounds, config.mutation_eta,
                                             config.mutation_prob, rng));
      children.push_back(polynomial_mutation(c2, spec.bounds, config.mutation_eta,
                                             config.mutation_prob, rng));
    }
    for (const auto& c : children) pop.push_back(evaluate(spec, c));

    const auto combined_rank = fast_nondominated_sort(pop);
    std::vector<double> combined_crowd(pop.size(), 0.0);
    std::vector<std::size_t> survivors;
    survivors.reserve(n);
    for (const auto& f : group_fronts(combined_rank)) {
      assign_crowding(pop, f, combined_crowd);
      if (survivors.size() + f.size() <= n) {
        survivors.insert(survivors.end(), f.begin(), f.end());
        if (survivors.size() == n) break;
        continue;
      }
      std::vector<std::size_t> last = f;
      std::stable_sort(last.begin(), last.end(), [&](std::size_t a, std::size_t b) {
        return combined_crowd[a] > combined_crowd[b];
      });
      survivors.insert(survivors.end(), last.begin(),
                       last.begin() + static_cast<std::ptrdiff_t>(n - survivors.size()));
      break;
    }

    std::vector<Evaluated> next;
    next.reserve(2 * n);
    rank.assign(n, 0);
    crowd.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      rank[i] = combined_rank[survivors[i]];
      crowd[i] = combined_crowd[survivors[i]];
      next.push_back(std::move(pop[survivors[i]]));
    }
    pop = std::move(next);
  }

  std::vector<Evaluated> first;
  for (std::size_t i = 0; i < pop.size(); ++i)
    if (rank[i] == 1) first.push_back(pop[i]);
  const bool any_feasible =
      std::any_of(first.begin(), first.end(), [](const Evaluated& e) { return e.feasible; });
  if (!any_feasible) throw NoFeasibleSolution(make_front(spec, std::move(first)));
  std::erase_if(first, [](const Evaluated& e) { return !e.feasible; });
  return make_front(spec, std::move(first));
}

ParetoFront select_diverse(const ParetoFront& front, std::size_t count) {
  ParetoFront out = front;
  while (out.solutions.size() > count) {
    std::vector<std::vector<double>> objs;
    objs.reserve(out.solutions.size());
    for (const auto& s : out.solutions) objs.push_back(s.objectives);
    const auto d = crowding_distance(objs);
    std::size_t drop = 0;
    for (std::size_t i = 1; i < d.size(); ++i)
      if (d[i] <= d[drop]) drop = i;
    out.solutions.erase(out.solutions.begin() + static_cast<std::ptrdiff_t>(drop));
  }
  return out;
}

}  // namespace chromdev::pareto
