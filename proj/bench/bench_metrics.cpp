#include <benchmark/benchmark.h>

#include <numeric>
#include <random>

#include "storygraph/communities.hpp"
#include "storygraph/metrics.hpp"

using namespace storygraph;

namespace {

// Sparse connected graph with a heavy-tailed degree profile, roughly the
// shape of a merged story graph.
graph::Adjacency story_like(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  std::vector<std::uint32_t> ends;
  for (std::uint32_t v = 1; v < n; ++v) {
    for (int k = 0; k < 3; ++k) {
      const auto u = ends.empty() || rng() % 4 == 0 ? static_cast<std::uint32_t>(rng() % v) : ends[rng() % ends.size()];
      if (u == v) continue;
      edges.emplace_back(u, v);
      ends.push_back(u);
      ends.push_back(v);
    }
  }
  return graph::Adjacency::from_edges(n, edges);
}

template <auto Fn>
void run_kernel(benchmark::State& state) {
  const auto adj = story_like(static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(adj));
  state.counters["nodes"] = static_cast<double>(adj.node_count());
  state.counters["edges"] = static_cast<double>(adj.edge_count());
}

std::vector<double> btw_omp(const graph::Adjacency& a) { return metrics::betweenness(a); }
std::vector<double> btw_serial(const graph::Adjacency& a) { return metrics::serial::betweenness(a); }
std::vector<double> eig_omp(const graph::Adjacency& a) { return metrics::eigenvector_centrality(a); }
std::vector<double> eig_serial(const graph::Adjacency& a) { return metrics::serial::eigenvector_centrality(a); }
metrics::TopologyStats topo_omp(const graph::Adjacency& a) { return metrics::topology(a); }
metrics::TopologyStats topo_serial(const graph::Adjacency& a) { return metrics::serial::topology(a); }

std::vector<std::uint64_t> seeds(std::size_t k) {
  std::vector<std::uint64_t> s(k);
  std::iota(s.begin(), s.end(), 1);
  return s;
}
communities::Partition louvain_omp(const graph::Adjacency& a) { return communities::louvain_best_of(a, seeds(8)); }
communities::Partition louvain_serial(const graph::Adjacency& a) {
  return communities::serial::louvain_best_of(a, seeds(8));
}

}  // namespace

BENCHMARK(run_kernel<btw_serial>)->Name("betweenness/serial")->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(run_kernel<btw_omp>)->Name("betweenness/omp")->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(run_kernel<eig_serial>)->Name("eigenvector/serial")->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK(run_kernel<eig_omp>)->Name("eigenvector/omp")->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(run_kernel<topo_serial>)->Name("topology/serial")->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(run_kernel<topo_omp>)->Name("topology/omp")->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(run_kernel<louvain_serial>)->Name("louvain_best_of/serial")->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(run_kernel<louvain_omp>)->Name("louvain_best_of/omp")->Arg(2000)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
