#include <omp.h>

#include <algorithm>
#include <cmath>

#include "metrics_detail.hpp"
#include "storygraph/error.hpp"
#include "storygraph/metrics.hpp"

namespace storygraph::metrics {
namespace {

// Sources are split into fixed blocks so the floating-point reduction order
// is the same for any thread count.
constexpr std::size_t kBlock = 32;
constexpr std::size_t kBlocksPerWave = 64;

}  // namespace

std::vector<double> betweenness(const graph::Adjacency& adj) {
  const std::size_t n = adj.node_count();
  std::vector<double> bc(n, 0.0);
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  for (std::size_t wave = 0; wave < blocks; wave += kBlocksPerWave) {
    const std::size_t count = std::min(kBlocksPerWave, blocks - wave);
    std::vector<std::vector<double>> partial(count, std::vector<double>(n, 0.0));
#pragma omp parallel
    {
      detail::BrandesWork work(n);
#pragma omp for schedule(dynamic, 1)
      for (std::size_t b = 0; b < count; ++b) {
        const std::size_t lo = (wave + b) * kBlock, hi = std::min(n, lo + kBlock);
        for (std::size_t s = lo; s < hi; ++s) detail::accumulate_source(adj, s, work, partial[b]);
      }
    }
    for (const auto& p : partial)
      for (std::size_t v = 0; v < n; ++v) bc[v] += p[v];
  }
  for (auto& v : bc) v /= 2.0;
  return bc;
}

std::vector<double> eigenvector_centrality(const graph::Adjacency& adj, const EigenOptions& options) {
  const std::size_t n = adj.node_count();
  if (n == 0) throw ValidationError("eigenvector centrality of an empty graph");
  std::vector<double> x(n, 1.0), next(n);
  double residual = 0.0;
  const auto sn = static_cast<std::ptrdiff_t>(n);
  for (std::size_t it = 0; it < options.max_iter; ++it) {
    double peak = 0.0;
#pragma omp parallel for reduction(max : peak) schedule(static)
    for (std::ptrdiff_t v = 0; v < sn; ++v) {
      double sum = x[v];
      for (auto p = adj.begin(v); p != adj.end(v); ++p) sum += x[*p];
      next[v] = sum;
      peak = std::max(peak, sum);
    }
    residual = 0.0;
#pragma omp parallel for reduction(max : residual) schedule(static)
    for (std::ptrdiff_t v = 0; v < sn; ++v) {
      next[v] /= peak;
      residual = std::max(residual, std::abs(next[v] - x[v]));
    }
    x.swap(next);
    if (residual < options.tol) return detail::finish_eigen(adj, std::move(x));
  }
  throw ConvergenceError("eigenvector centrality did not converge in " + std::to_string(options.max_iter) +
                             " iterations",
                         residual);
}

TopologyStats topology(const graph::Adjacency& adj) {
  TopologyStats st = detail::topology_base(adj);
  if (st.node_count == 0) return st;
  const auto lcc = detail::largest_component(adj);
  std::uint64_t total = 0;
  std::size_t diameter = 0;
  const auto sl = static_cast<std::ptrdiff_t>(lcc.size());
#pragma omp parallel
  {
    std::vector<std::int64_t> dist(adj.node_count(), -1);
#pragma omp for reduction(+ : total) reduction(max : diameter) schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < sl; ++i) {
      auto [sum, ecc] = detail::bfs_distances(adj, lcc[i], dist);
      total += sum;
      diameter = std::max(diameter, ecc);
    }
  }
  detail::finish_paths(st, lcc.size(), total, diameter);
  const auto sn = static_cast<std::ptrdiff_t>(adj.node_count());
  std::vector<double> local(adj.node_count());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t v = 0; v < sn; ++v) local[v] = detail::local_clustering(adj, v);
  double clustering = 0.0;
  for (double c : local) clustering += c;
  st.avg_clustering = clustering / static_cast<double>(st.node_count);
  return st;
}

}  // namespace storygraph::metrics
