#include <benchmark/benchmark.h>

#include <random>

#include "conley/cubical.hpp"
#include "conley/ecohomology.hpp"
#include "../tests/unit/test_support.hpp"

using namespace conley;

static void BM_RelativeCohomology2D(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto grid = conley::testing::square_grid(2, 64);
  const auto total = conley::testing::random_blob(grid, static_cast<std::size_t>(state.range(0)), rng);
  const auto sub = conley::testing::random_subset(total, 0.2, rng);
  for (auto _ : state) benchmark::DoNotOptimize(cubical::relative_cohomology({total, sub}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(total.size()));
}
BENCHMARK(BM_RelativeCohomology2D)->Arg(200)->Arg(1000)->Arg(3000)->Unit(benchmark::kMillisecond);

static void BM_RelativeCohomology3D(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto grid = conley::testing::square_grid(3, 20);
  const auto total = conley::testing::random_blob(grid, static_cast<std::size_t>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(cubical::relative_cohomology({total, cubical::CubeSet(grid)}));
}
BENCHMARK(BM_RelativeCohomology3D)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_TripleSequence(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const auto grid = conley::testing::square_grid(2, 32);
  const auto total = conley::testing::random_blob(grid, 400, rng);
  const auto sub1 = conley::testing::random_subset(total, 0.5, rng);
  const auto sub2 = conley::testing::random_subset(sub1, 0.5, rng);
  for (auto _ : state) benchmark::DoNotOptimize(cubical::triple_sequence(total, sub1, sub2));
}
BENCHMARK(BM_TripleSequence)->Unit(benchmark::kMillisecond);

static void BM_NegativeSphereTower(benchmark::State& state) {
  ecoh::ShapeSpec shape;
  shape.family = ecoh::ShapeFamily::sphere;
  std::vector<int> ladder;
  for (int n = 2; n <= state.range(0); ++n) ladder.push_back(n);
  for (auto _ : state) benchmark::DoNotOptimize(ecoh::tower_negative(shape, ladder, ecoh::LadderGrid{1.5, 9}));
}
BENCHMARK(BM_NegativeSphereTower)->DenseRange(4, 6)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
