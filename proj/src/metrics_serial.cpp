#include <algorithm>
#include <cmath>
#include <queue>

#include "metrics_detail.hpp"
#include "storygraph/error.hpp"
#include "storygraph/metrics.hpp"

namespace storygraph::metrics::serial {

std::vector<double> betweenness(const graph::Adjacency& adj) {
  const std::size_t n = adj.node_count();
  std::vector<double> bc(n, 0.0);
  detail::BrandesWork work(n);
  for (std::size_t s = 0; s < n; ++s) detail::accumulate_source(adj, s, work, bc);
  for (auto& v : bc) v /= 2.0;
  return bc;
}

std::vector<double> eigenvector_centrality(const graph::Adjacency& adj, const EigenOptions& options) {
  const std::size_t n = adj.node_count();
  if (n == 0) throw ValidationError("eigenvector centrality of an empty graph");
  std::vector<double> x(n, 1.0), next(n);
  double residual = 0.0;
  for (std::size_t it = 0; it < options.max_iter; ++it) {
    double peak = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      double sum = x[v];
      for (auto p = adj.begin(v); p != adj.end(v); ++p) sum += x[*p];
      next[v] = sum;
      peak = std::max(peak, sum);
    }
    residual = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
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
  std::vector<std::int64_t> dist(adj.node_count(), -1);
  std::uint64_t total = 0;
  std::size_t diameter = 0;
  for (auto s : lcc) {
    auto [sum, ecc] = detail::bfs_distances(adj, s, dist);
    total += sum;
    diameter = std::max(diameter, ecc);
  }
  detail::finish_paths(st, lcc.size(), total, diameter);
  double clustering = 0.0;
  for (std::size_t v = 0; v < adj.node_count(); ++v) clustering += detail::local_clustering(adj, v);
  st.avg_clustering = clustering / static_cast<double>(st.node_count);
  return st;
}

}  // namespace storygraph::metrics::serial
