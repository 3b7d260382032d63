#include <benchmark/benchmark.h>

#include "percolab/estimators.hpp"
#include "percolab/percolation.hpp"
#include "percolab/triangle.hpp"

using namespace percolab;

namespace {

// Q_14 near its lambda = 1/2 threshold unless stated otherwise.
constexpr double kP = 0.0718;

void BM_SampleForest(benchmark::State& state, SamplingMode mode, double p) {
  const Graph g = Graph::hypercube(static_cast<std::uint32_t>(state.range(0)));
  ClusterForest f;
  std::uint64_t r = 0;
  for (auto _ : state) {
    sample_forest(g, p, 1, r++, mode, f);
    benchmark::DoNotOptimize(f.num_clusters());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.edge_count()));
}
BENCHMARK_CAPTURE(BM_SampleForest, edge_keyed, SamplingMode::kEdgeKeyed, kP)->Arg(10)->Arg(14);
BENCHMARK_CAPTURE(BM_SampleForest, skip, SamplingMode::kSkip, kP)->Arg(10)->Arg(14);
BENCHMARK_CAPTURE(BM_SampleForest, edge_keyed_dense, SamplingMode::kEdgeKeyed, 0.3)->Arg(14);
BENCHMARK_CAPTURE(BM_SampleForest, skip_dense, SamplingMode::kSkip, 0.3)->Arg(14);

void BM_SampleConfig(benchmark::State& state) {
  const Graph g = Graph::hypercube(14);
  std::uint64_t r = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_config(g, kP, 1, r++).count());
}
BENCHMARK(BM_SampleConfig);

void BM_BuildForest(benchmark::State& state) {
  const Graph g = Graph::hypercube(14);
  const BondConfig c = sample_config(g, kP, 1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(build_forest(g, c).num_clusters());
}
BENCHMARK(BM_BuildForest);

void BM_ConfigStats(benchmark::State& state) {
  const Graph g = Graph::hypercube(14);
  const ClusterForest f = build_forest(g, sample_config(g, kP, 1, 0));
  StatsScratch scratch;
  for (auto _ : state) benchmark::DoNotOptimize(config_stats(f, &scratch).sum_sq_sizes);
}
BENCHMARK(BM_ConfigStats);

void BM_CompleteGraphSample(benchmark::State& state) {
  const Graph g = Graph::complete(10000);
  ClusterForest f;
  std::uint64_t r = 0;
  for (auto _ : state) {
    sample_forest(g, 1.0 / 9999.0, 1, r++, SamplingMode::kAuto, f);
    benchmark::DoNotOptimize(f.num_clusters());
  }
}
BENCHMARK(BM_CompleteGraphSample);

void BM_EstimateChi(benchmark::State& state) {
  const Graph g = Graph::hypercube(12);
  RunOptions opt;
  opt.workers = 1;
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_chi(g, 0.09, 256, seed++, opt).mean);
  state.SetItemsProcessed(state.iterations() * 256);
}
BENCHMARK(BM_EstimateChi);

void BM_TriangleRow(benchmark::State& state, ConvolutionMethod method) {
  const Graph g = Graph::hypercube(static_cast<std::uint32_t>(state.range(0)));
  const TwoPointTable t = estimate_two_point(g, 0.1, 16, 1);
  for (auto _ : state) benchmark::DoNotOptimize(triangle_row(t, g, method).front());
}
BENCHMARK_CAPTURE(BM_TriangleRow, direct, ConvolutionMethod::kDirect)->Arg(8)->Arg(10);
BENCHMARK_CAPTURE(BM_TriangleRow, fft, ConvolutionMethod::kFft)->Arg(8)->Arg(10)->Arg(14);

}  // namespace

BENCHMARK_MAIN();
