#include <random>

#include <benchmark/benchmark.h>

#include "chromdev/case_study.hpp"
#include "chromdev/pareto.hpp"
#include "chromdev/plant.hpp"
#include "chromdev/rsm.hpp"

using namespace chromdev;

static void BM_NondominatedSort(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<pareto::Evaluated> pop(n);
  for (auto& e : pop) e.objectives = {u(rng), u(rng), u(rng), u(rng)};
  for (auto _ : state) benchmark::DoNotOptimize(pareto::fast_nondominated_sort(pop));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_NondominatedSort)->RangeMultiplier(2)->Range(500, 4000)->Complexity();

static void BM_StepwiseScreening(benchmark::State& state) {
  rsm::Dataset d{"Y3", {}};
  for (const auto& r : case_study::screening_runs()) {
    d.rows.push_back({r.params, case_study::batch(r.batch_id), r.measured.fg_purity});
  }
  const auto pool = rsm::candidate_terms(6, 4);
  for (auto _ : state) benchmark::DoNotOptimize(rsm::stepwise_select(d, pool));
}
BENCHMARK(BM_StepwiseScreening);

static void BM_PlantHour(benchmark::State& state) {
  for (auto _ : state) {
    plant::Plant p(case_study::plant_config());
    p.submit_experiment({{1, 1.5, 2, 1, 3, 1}, "250402", "F1"});
    benchmark::DoNotOptimize(p.step(3600.0));
  }
  state.SetItemsProcessed(state.iterations() * 3600);
}
BENCHMARK(BM_PlantHour);

static void BM_Nsga(benchmark::State& state) {
  const auto spec = case_study::optimization_spec(case_study::published_models(),
                                                  case_study::batch("250409"));
  for (auto _ : state) benchmark::DoNotOptimize(pareto::optimize(spec, {200, 50, 1}));
}
BENCHMARK(BM_Nsga)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
