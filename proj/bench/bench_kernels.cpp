#include <benchmark/benchmark.h>

#include "roundness/graphs.hpp"
#include "roundness/hamming.hpp"
#include "roundness/roundness.hpp"

using namespace roundness;

static void BM_BfsParallel(benchmark::State& state) {
  const auto g = hypercube_graph(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bfs_distances(g));
}
BENCHMARK(BM_BfsParallel)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_BfsSerial(benchmark::State& state) {
  const auto g = hypercube_graph(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bfs_distances_serial(g));
}
BENCHMARK(BM_BfsSerial)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_ScanParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(scan_subsets(state.range(0)));
}
BENCHMARK(BM_ScanParallel)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_ScanSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(scan_subsets_serial(state.range(0)));
}
BENCHMARK(BM_ScanSerial)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_Roundness(benchmark::State& state) {
  const auto s = path_metric(parse_graph_spec("dodecahedron"));
  for (auto _ : state) benchmark::DoNotOptimize(generalized_roundness(s));
}
BENCHMARK(BM_Roundness)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
