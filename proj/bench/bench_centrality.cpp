// Serial reference vs OpenMP kernels on seeded random collaboration graphs.
#include <random>
#include <string>

#include <benchmark/benchmark.h>

#include "scholarscope/centrality.hpp"
#include "scholarscope/community.hpp"
#include "scholarscope/graph.hpp"

using namespace scholarscope::colabrix;

namespace {

// Sparse graph with a ring backbone so it stays connected.
Graph random_graph(int n, int extra_edges_per_node, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, n - 1);
  Graph::Builder b;
  auto name = [](int i) { return "n" + std::to_string(i); };
  for (int i = 0; i < n; ++i) b.add_edge(name(i), name((i + 1) % n));
  for (int i = 0; i < n * extra_edges_per_node; ++i) {
    int u = pick(rng), v = pick(rng);
    if (u != v) b.add_edge(name(u), name(v));
  }
  return b.build();
}

template <std::vector<double> (*Kernel)(const Graph&)>
void run(benchmark::State& state) {
  const auto g = random_graph(static_cast<int>(state.range(0)), 3, 42);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(g));
  state.SetComplexityN(state.range(0));
}

void communities(benchmark::State& state) {
  const auto g = random_graph(static_cast<int>(state.range(0)), 3, 42);
  CommunityOptions opts;
  opts.backend = state.range(1) ? Backend::kParallel : Backend::kSerial;
  for (auto _ : state) benchmark::DoNotOptimize(detect_communities(g, CommunityMethod::kGirvanNewman, opts));
}

}  // namespace

BENCHMARK(run<kernels::betweenness_serial>)->Name("betweenness/serial")->RangeMultiplier(2)->Range(256, 2048)->Unit(benchmark::kMillisecond);
BENCHMARK(run<kernels::betweenness_parallel>)->Name("betweenness/parallel")->RangeMultiplier(2)->Range(256, 2048)->Unit(benchmark::kMillisecond);
BENCHMARK(run<kernels::closeness_serial>)->Name("closeness/serial")->RangeMultiplier(2)->Range(256, 2048)->Unit(benchmark::kMillisecond);
BENCHMARK(run<kernels::closeness_parallel>)->Name("closeness/parallel")->RangeMultiplier(2)->Range(256, 2048)->Unit(benchmark::kMillisecond);
BENCHMARK(run<kernels::edge_betweenness_serial>)->Name("edge_betweenness/serial")->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(run<kernels::edge_betweenness_parallel>)->Name("edge_betweenness/parallel")->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(communities)->Name("girvan_newman")->Args({64, 0})->Args({64, 1})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
