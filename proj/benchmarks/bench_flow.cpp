#include <benchmark/benchmark.h>

#include "conley/conley_index.hpp"
#include "conley/floer.hpp"
#include "conley/scenarios.hpp"

using namespace conley;

namespace {

const char* const kScenarios[] = {"quadratic-point-plane", "cancel-pair", "double-well"};

}  // namespace

static void BM_OuterMap(benchmark::State& state) {
  const auto s = scenarios::builtin_scenario(kScenarios[state.range(0)]);
  const auto grid = index::region_grid(s.region, s.level, s.resolution);
  const auto field = index::gradient_field(s.spec, s.level);
  for (auto _ : state) benchmark::DoNotOptimize(index::outer_map(field, grid, s.flow));
  state.SetLabel(s.name);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.cube_count()));
}
BENCHMARK(BM_OuterMap)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

static void BM_IndexPairForRegion(benchmark::State& state) {
  const auto s = scenarios::builtin_scenario(kScenarios[state.range(0)]);
  for (auto _ : state)
    benchmark::DoNotOptimize(index::index_pair_for_region(s.spec, s.level, s.region, s.resolution, s.flow));
  state.SetLabel(s.name);
}
BENCHMARK(BM_IndexPairForRegion)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

static void BM_ConleyIndex(benchmark::State& state) {
  const auto s = scenarios::builtin_scenario(kScenarios[state.range(0)]);
  const auto rp = index::index_pair_for_region(s.spec, s.level, s.region, s.resolution, s.flow);
  for (auto _ : state) benchmark::DoNotOptimize(index::conley_index(rp.pair, s.ladder));
  state.SetLabel(s.name);
}
BENCHMARK(BM_ConleyIndex)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

static void BM_FloerComplex(benchmark::State& state) {
  const auto s = scenarios::builtin_scenario(kScenarios[state.range(0)]);
  for (auto _ : state) benchmark::DoNotOptimize(floer::build_floer_complex(s.spec, s.region, s.level));
  state.SetLabel(s.name);
}
BENCHMARK(BM_FloerComplex)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
