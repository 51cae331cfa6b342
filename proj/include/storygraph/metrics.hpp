#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "storygraph/graph.hpp"

namespace storygraph::metrics {

struct TopologyStats {
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  double density = 0.0;
  std::size_t diameter = 0;          // largest connected component
  double avg_shortest_path = 0.0;    // largest connected component
  double avg_clustering = 0.0;
  double degree_assortativity = 0.0;
  bool assortativity_defined = false;
  std::size_t connected_components = 0;
  std::size_t lcc_size = 0;
};

struct EigenOptions {
  double tol = 1e-8;
  std::size_t max_iter = 1000;
};

// OpenMP kernels. Results do not depend on the thread count.
std::vector<std::size_t> degree(const graph::Adjacency& adj);
std::vector<double> betweenness(const graph::Adjacency& adj);
std::vector<double> eigenvector_centrality(const graph::Adjacency& adj, const EigenOptions& options = {});
TopologyStats topology(const graph::Adjacency& adj);

// Single-threaded reference implementations of the same kernels.
namespace serial {
std::vector<double> betweenness(const graph::Adjacency& adj);
std::vector<double> eigenvector_centrality(const graph::Adjacency& adj, const EigenOptions& options = {});
TopologyStats topology(const graph::Adjacency& adj);
}  // namespace serial

TopologyStats topology(const graph::MultilayerGraph& g);

inline constexpr double kRankTieTolerance = 1e-9;

// Descending fractional ranks starting at 1; values within the tie tolerance
// share the mean of the positions they occupy.
std::vector<double> fractional_ranks(const std::vector<double>& values, double tol = kRankTieTolerance);

struct NodeMetrics {
  std::string id;
  std::string layer;  // layer tag
  double degree = 0.0;
  double betweenness = 0.0;
  double eigenvector = 0.0;
};

struct InfluenceRow {
  NodeMetrics node;
  double rank_deg = 0.0;
  double rank_btw = 0.0;
  double rank_eig = 0.0;
  double influence = 0.0;
};

using InfluenceRanking = std::vector<InfluenceRow>;

// Ranks precomputed centrality columns. Sorted by influence, then id.
InfluenceRanking rank_influence(const std::vector<NodeMetrics>& nodes);

InfluenceRanking influence_scores(const graph::MultilayerGraph& g, const EigenOptions& options = {});

void write_influence_csv(std::ostream& out, const InfluenceRanking& ranking, std::optional<std::size_t> top = {});
void write_topology_csv(std::ostream& out, const std::vector<std::pair<std::string, TopologyStats>>& rows);

}  // namespace storygraph::metrics
