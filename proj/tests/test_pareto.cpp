#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "chromdev/pareto.hpp"
#include "oracles/oracles.hpp"
#include "test_util.hpp"

using namespace chromdev;
using namespace chromdev::pareto;

namespace {

rsm::RegressionModel linear(std::string name, double c0, std::vector<std::pair<std::size_t, double>> mains) {
  rsm::RegressionModel m;
  m.response_name = std::move(name);
  m.terms.push_back(rsm::Term::intercept());
  m.coefficients.push_back(c0);
  for (auto [j, c] : mains) {
    m.terms.push_back(rsm::Term::main(j));
    m.coefficients.push_back(c);
  }
  return m;
}

// max X1 and max -X1 + 2: every point in the box is Pareto-optimal in X1.
OptimizationSpec tradeoff() {
  OptimizationSpec s;
  s.objectives = {linear("A", 0, {{0, 1}}), linear("B", 2, {{0, -1}})};
  s.bounds = default_bounds();
  s.attrs = {"b", 1, 1, 1, 1};
  return s;
}

std::vector<Evaluated> random_population(std::size_t n, std::size_t m, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> level(0, 4);  // coarse values force ties
  std::bernoulli_distribution infeasible(0.2);
  std::vector<Evaluated> pop(n);
  for (auto& e : pop) {
    for (std::size_t k = 0; k < m; ++k) e.objectives.push_back(level(rng));
    if (infeasible(rng)) {
      e.feasible = false;
      e.violation = 0.1 * (1 + level(rng));
    }
  }
  return pop;
}

}  // namespace

TEST(NondominatedSort, AgreesWithBruteForcePeeling) {
  for (unsigned seed = 1; seed <= 30; ++seed) {
    for (std::size_t m : {2u, 3u, 4u}) {
      const auto pop = random_population(60, m, seed * 7 + m);
      std::vector<oracle::Point> pts;
      for (const auto& e : pop) pts.push_back({e.objectives, e.feasible ? 0.0 : e.violation});
      EXPECT_EQ(fast_nondominated_sort(pop), oracle::peel_ranks(pts)) << seed << " " << m;
    }
  }
}

TEST(NondominatedSort, ConstrainedDomination) {
  Evaluated good{{}, {1, 1}, {}, 0, true};
  Evaluated better{{}, {2, 1}, {}, 0, true};
  Evaluated bad{{}, {9, 9}, {}, 0.5, false};
  Evaluated worse{{}, {9, 9}, {}, 0.8, false};
  EXPECT_TRUE(constrained_dominates(better, good));
  EXPECT_FALSE(constrained_dominates(good, better));
  EXPECT_TRUE(constrained_dominates(good, bad));
  EXPECT_TRUE(constrained_dominates(bad, worse));
  EXPECT_FALSE(constrained_dominates(good, good));
}

TEST(GroupFronts, ByRank) {
  const std::vector<std::size_t> ranks{2, 1, 3, 1};
  const auto f = group_fronts(ranks);
  ASSERT_EQ(f.size(), 3u);
  EXPECT_EQ(f[0], (std::vector<std::size_t>{1, 3}));
  EXPECT_EQ(f[1], (std::vector<std::size_t>{0}));
}

TEST(Crowding, HandComputed) {
  const std::vector<std::vector<double>> obj{{1, 4}, {2, 3}, {3, 2}, {4, 1}};
  const auto d = crowding_distance(obj);
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_EQ(d[0], inf);
  EXPECT_EQ(d[3], inf);
  EXPECT_NEAR(d[1], 4.0 / 3.0, 1e-12);
  EXPECT_NEAR(d[2], 4.0 / 3.0, 1e-12);
  const std::vector<std::vector<double>> two{{1, 1}, {2, 2}};
  for (double v : crowding_distance(two)) EXPECT_EQ(v, inf);
}

TEST(Sbx, PreservesMeanAndFollowsSpreadDistribution) {
  const auto bounds = default_bounds();
  const ProcessParams p1{0.95, 1.45, 1.95, 0.95, 2.95, 0.95};
  const ProcessParams p2{1.05, 1.55, 2.05, 1.05, 3.05, 1.05};
  Rng rng(17);
  const int n = 40000;
  std::size_t tight = 0, total = 0;
  for (int i = 0; i < n; ++i) {
    auto [c1, c2] = sbx_crossover(p1, p2, bounds, 15.0, rng);
    for (std::size_t j = 0; j < 6; ++j) {
      EXPECT_NEAR(c1[j] + c2[j], p1[j] + p2[j], 1e-12);
      tight += std::abs(c1[j] - c2[j]) <= 0.9 * std::abs(p1[j] - p2[j]);
      ++total;
    }
  }
  // Half the coordinates cross; a crossed one has beta <= b with
  // probability b^(eta+1) / 2.
  const double expected = 0.5 * 0.5 * std::pow(0.9, 16.0);
  EXPECT_NEAR(double(tight) / total, expected, 0.004);
}

TEST(Sbx, ClipsToBounds) {
  const auto bounds = default_bounds();
  const ProcessParams lo{0.5, 1, 1.5, 0.5, 2.5, 0.5};
  const ProcessParams hi{1.5, 2, 2.5, 1.5, 3.5, 1.5};
  Rng rng(3);
  for (int i = 0; i < 2000; ++i) {
    auto [c1, c2] = sbx_crossover(lo, hi, bounds, 2.0, rng);
    for (std::size_t j = 0; j < 6; ++j) {
      EXPECT_GE(c1[j], bounds[j].low);
      EXPECT_LE(c2[j], bounds[j].high);
    }
  }
}

TEST(Mutation, MonteCarloAgainstClosedForm) {
  const auto bounds = default_bounds();
  const ProcessParams mid{1, 1.5, 2, 1, 3, 1};
  Rng rng(5);
  const int n = 40000;
  std::size_t below = 0, changed = 0;
  double mean_shift = 0;
  for (int i = 0; i < n; ++i) {
    const auto c = polynomial_mutation(mid, bounds, 20.0, 1.0, rng);
    for (std::size_t j = 0; j < 6; ++j) {
      EXPECT_GE(c[j], bounds[j].low);
      EXPECT_LE(c[j], bounds[j].high);
      below += c[j] <= mid[j] - 0.1;
      mean_shift += (c[j] - mid[j]) / (6.0 * n);
    }
  }
  // At the centre, delta <= -0.1 iff u <= (0.9^21 - 0.5^21) / (2 (1 - 0.5^21)).
  const double c = std::pow(0.5, 21.0);
  const double expected = (std::pow(0.9, 21.0) - c) / (2.0 * (1.0 - c));
  EXPECT_NEAR(double(below) / (6.0 * n), expected, 0.004);
  EXPECT_NEAR(mean_shift, 0.0, 0.002);

  for (int i = 0; i < 5000; ++i) {
    const auto m = polynomial_mutation(mid, bounds, 20.0, 0.25, rng);
    for (std::size_t j = 0; j < 6; ++j) changed += m[j] != mid[j];
  }
  EXPECT_NEAR(double(changed) / 30000.0, 0.25, 0.015);
}

TEST(Optimize, TradeoffFrontSpansRangeAndIsDeterministic) {
  const auto spec = tradeoff();
  const NsgaConfig cfg{60, 40, 9};
  const auto a = optimize(spec, cfg);
  const auto b = optimize(spec, cfg);
  ASSERT_FALSE(a.solutions.empty());
  ASSERT_EQ(a.solutions.size(), b.solutions.size());
  for (std::size_t i = 0; i < a.solutions.size(); ++i) EXPECT_EQ(a.solutions[i].x, b.solutions[i].x);
  double lo = 9, hi = -9;
  for (const auto& s : a.solutions) {
    EXPECT_TRUE(s.feasible);
    lo = std::min(lo, s.x[0]);
    hi = std::max(hi, s.x[0]);
  }
  EXPECT_LT(lo, 0.55);
  EXPECT_GT(hi, 1.45);
  EXPECT_EQ(a.objective_names, (std::vector<std::string>{"A", "B"}));
}

TEST(Optimize, ConstraintIsRespected) {
  auto spec = tradeoff();
  spec.constraints.push_back({linear("C", 0, {{0, 1}}), 1.2});
  const auto f = optimize(spec, {40, 30, 2});
  ASSERT_FALSE(f.solutions.empty());
  for (const auto& s : f.solutions) {
    EXPECT_GE(s.x[0], 1.2 - 1e-12);
    ASSERT_EQ(s.margins.size(), 1u);
    EXPECT_GE(s.margins[0], -1e-12);
  }
}

TEST(Optimize, InfeasibleThrowsWithLeastViolatingFront) {
  auto spec = tradeoff();
  spec.constraints.push_back({linear("C", 0, {{0, 1}}), 5.0});
  try {
    optimize(spec, {20, 10, 1});
    FAIL() << "expected NoFeasibleSolution";
  } catch (const NoFeasibleSolution& e) {
    EXPECT_EQ(e.code(), Errc::no_feasible_solution);
    ASSERT_FALSE(e.front().solutions.empty());
    for (const auto& s : e.front().solutions) EXPECT_NEAR(s.x[0], 1.5, 0.05);
  }
}

TEST(Optimize, ConfigValidation) {
  EXPECT_THROW(optimize(tradeoff(), {7, 10, 1}), Error);
  EXPECT_THROW(optimize(tradeoff(), {2, 10, 1}), Error);
  auto spec = tradeoff();
  spec.objectives.clear();
  EXPECT_THROW(optimize(spec, {20, 10, 1}), Error);
}

TEST(SelectDiverse, KeepsExtremes) {
  const auto f = optimize(tradeoff(), {60, 40, 9});
  ASSERT_GT(f.solutions.size(), 5u);
  const auto s = select_diverse(f, 5);
  ASSERT_EQ(s.solutions.size(), 5u);
  auto x1 = [](const ParetoFront& p) {
    std::vector<double> v;
    for (const auto& e : p.solutions) v.push_back(e.x[0]);
    return v;
  };
  const auto all = x1(f), kept = x1(s);
  EXPECT_EQ(*std::min_element(kept.begin(), kept.end()), *std::min_element(all.begin(), all.end()));
  EXPECT_EQ(*std::max_element(kept.begin(), kept.end()), *std::max_element(all.begin(), all.end()));
  EXPECT_EQ(select_diverse(f, 1000).solutions.size(), f.solutions.size());
}

TEST(FrontCsv, Header) {
  ParetoFront f{{"Y1", "Y2"}, {Evaluated{{1, 1.5, 2, 1, 3, 1}, {6.5, 80}, {}, 0, true}}};
  std::ostringstream s;
  write_front_csv(s, f);
  EXPECT_EQ(s.str(), "X1,X2,X3,X4,X5,X6,Y1,Y2,feasible\n1,1.5,2,1,3,1,6.5,80,true\n");
}
