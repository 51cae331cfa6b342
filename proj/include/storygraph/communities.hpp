#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <vector>

#include "storygraph/graph.hpp"

namespace storygraph::communities {

struct Partition {
  std::vector<std::uint32_t> assignment;  // node index -> community, ids contiguous from 0
  double modularity = 0.0;
  std::uint64_t seed = 0;

  std::size_t community_count() const;
};

struct LouvainOptions {
  double resolution = 1.0;
  std::uint64_t seed = 42;
};

double modularity(const graph::Adjacency& adj, const std::vector<std::uint32_t>& assignment, double resolution = 1.0);
double modularity(const graph::MultilayerGraph& g, const std::vector<std::uint32_t>& assignment,
                  double resolution = 1.0);

Partition louvain(const graph::Adjacency& adj, const LouvainOptions& options = {});
Partition louvain(const graph::MultilayerGraph& g, const LouvainOptions& options = {});

// Runs one Louvain per seed and keeps the highest modularity (earliest seed
// on ties). The OpenMP version runs seeds concurrently.
Partition louvain_best_of(const graph::Adjacency& adj, const std::vector<std::uint64_t>& seeds, double resolution = 1.0);
namespace serial {
Partition louvain_best_of(const graph::Adjacency& adj, const std::vector<std::uint64_t>& seeds, double resolution = 1.0);
}

struct CommunitySummary {
  std::uint32_t id = 0;
  std::size_t size = 0;
  std::array<std::size_t, 5> per_layer{};  // indexed like graph::kLayers
};

struct CommunityReport {
  double modularity = 0.0;
  std::vector<CommunitySummary> communities;  // by id
};

CommunityReport community_report(const graph::MultilayerGraph& g, const Partition& partition);
void write_community_report(std::ostream& out, const CommunityReport& report);

}  // namespace storygraph::communities
