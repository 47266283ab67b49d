#include <benchmark/benchmark.h>

#include "bihc/cluster.hpp"
#include "bihc/counting.hpp"
#include "bihc/graph.hpp"
#include "bihc/oracle.hpp"
#include "bihc/sampler.hpp"

namespace {

using namespace bihc;

void BM_ExactLogZ(benchmark::State& state) {
  const BipartiteGraph g = even_cycle(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(exact_log_Z(g, {1.0, 1.0}));
}
BENCHMARK(BM_ExactLogZ)->Arg(12)->Arg(20)->Arg(28);

void BM_TruncatedExpansion(benchmark::State& state) {
  const BipartiteGraph g = random_biregular(2, 3, 9, 2);
  const RealFugacities lam{30.0, 0.2};
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(truncated_expansion(g, lam, m).value);
}
BENCHMARK(BM_TruncatedExpansion)->DenseRange(4, 10, 2)->Unit(benchmark::kMillisecond);

void BM_CountClusters(benchmark::State& state) {
  const BipartiteGraph g = random_biregular(2, 3, 9, 2);
  const int m = static_cast<int>(state.range(0));
  const PolymerSystem sys = PolymerSystem::build(g, m);
  for (auto _ : state) benchmark::DoNotOptimize(count_clusters(sys, m));
}
BENCHMARK(BM_CountClusters)->DenseRange(4, 10, 2)->Unit(benchmark::kMillisecond);

void BM_SampleExact(benchmark::State& state) {
  const BipartiteGraph g = random_biregular(2, 4, 12, 5);
  PolymerSampler sampler(g, {40.0, 0.3}, 0.1);
  auto rng = make_rng(7);
  for (auto _ : state) benchmark::DoNotOptimize(sampler.sample_independent_set(rng));
}
BENCHMARK(BM_SampleExact);

}  // namespace

BENCHMARK_MAIN();
