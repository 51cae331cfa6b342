#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "storygraph/graph.hpp"
#include "storygraph/metrics.hpp"

namespace storygraph::metrics::detail {

struct BrandesWork {
  explicit BrandesWork(std::size_t n) : sigma(n), dist(n, -1), delta(n), order(n), queue(n) {}
  std::vector<double> sigma;
  std::vector<std::int64_t> dist;
  std::vector<double> delta;
  std::vector<std::uint32_t> order;
  std::vector<std::uint32_t> queue;
};

// Adds the dependencies of source s to acc (both directions of each pair).
void accumulate_source(const graph::Adjacency& adj, std::size_t s, BrandesWork& w, std::vector<double>& acc);

// Zeroes isolated nodes and rescales to a maximum of 1.
std::vector<double> finish_eigen(const graph::Adjacency& adj, std::vector<double> x);

TopologyStats topology_base(const graph::Adjacency& adj);
std::vector<std::uint32_t> largest_component(const graph::Adjacency& adj);

// Returns (sum of distances, eccentricity) from s within its component.
// dist is scratch space of size n and is restored to -1.
std::pair<std::uint64_t, std::size_t> bfs_distances(const graph::Adjacency& adj, std::size_t s,
                                                    std::vector<std::int64_t>& dist);
void finish_paths(TopologyStats& st, std::size_t lcc_size, std::uint64_t total, std::size_t diameter);
double local_clustering(const graph::Adjacency& adj, std::size_t v);

}  // namespace storygraph::metrics::detail
