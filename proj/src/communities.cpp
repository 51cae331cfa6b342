#include "storygraph/communities.hpp"

#include <omp.h>

#include <algorithm>
#include <iomanip>
#include <numeric>
#include <random>

#include "storygraph/error.hpp"

namespace storygraph::communities {
namespace {

struct Level {
  std::vector<std::vector<std::pair<std::uint32_t, double>>> nbrs;  // no self entries
  std::vector<double> self;                                          // loop weight, counted once
  std::vector<double> strength;                                      // includes 2 * self
  double total = 0.0;                                                // 2m
};

Level from_adjacency(const graph::Adjacency& adj) {
  Level L;
  const std::size_t n = adj.node_count();
  L.nbrs.resize(n);
  L.self.assign(n, 0.0);
  L.strength.assign(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    for (auto p = adj.begin(v); p != adj.end(v); ++p) L.nbrs[v].emplace_back(*p, 1.0);
    L.strength[v] = static_cast<double>(adj.degree(v));
    L.total += L.strength[v];
  }
  return L;
}

std::vector<std::uint32_t> renumber(const std::vector<std::uint32_t>& comm) {
  std::vector<std::uint32_t> map(comm.size(), UINT32_MAX), out(comm.size());
  std::uint32_t next = 0;
  for (std::size_t v = 0; v < comm.size(); ++v) {
    auto& m = map[comm[v]];
    if (m == UINT32_MAX) m = next++;
    out[v] = m;
  }
  return out;
}

// Local moving phase. Returns true if any node changed community.
bool move_nodes(const Level& L, std::vector<std::uint32_t>& comm, double gamma, std::mt19937_64& rng) {
  const std::size_t n = L.nbrs.size();
  std::vector<double> tot(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) tot[comm[v]] += L.strength[v];
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = n; i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(order[i - 1], order[pick(rng)]);
  }
  std::vector<double> link(n, 0.0);
  std::vector<std::uint32_t> touched;
  bool any = false, moved = true;
  const double scale = gamma / L.total;
  while (moved) {
    moved = false;
    for (auto v : order) {
      const auto old = comm[v];
      const double k = L.strength[v];
      touched.clear();
      for (auto [u, w] : L.nbrs[v]) {
        const auto c = comm[u];
        if (link[c] == 0.0) touched.push_back(c);
        link[c] += w;
      }
      tot[old] -= k;
      const double stay = link[old] - scale * tot[old] * k;
      auto best = old;
      double best_gain = stay;
      std::sort(touched.begin(), touched.end());
      for (auto c : touched) {
        if (c == old) continue;
        const double gain = link[c] - scale * tot[c] * k;
        if (gain > best_gain + 1e-12) {
          best = c;
          best_gain = gain;
        }
      }
      tot[best] += k;
      comm[v] = best;
      if (best != old) moved = any = true;
      for (auto c : touched) link[c] = 0.0;
    }
  }
  return any;
}

Level aggregate(const Level& L, const std::vector<std::uint32_t>& comm, std::size_t count) {
  Level out;
  out.nbrs.resize(count);
  out.self.assign(count, 0.0);
  out.strength.assign(count, 0.0);
  out.total = L.total;
  std::vector<std::vector<std::uint32_t>> members(count);
  for (std::size_t v = 0; v < comm.size(); ++v) members[comm[v]].push_back(static_cast<std::uint32_t>(v));
  std::vector<double> link(count, 0.0);
  std::vector<std::uint32_t> touched;
  for (std::uint32_t c = 0; c < count; ++c) {
    touched.clear();
    double inner = 0.0;
    for (auto v : members[c]) {
      out.self[c] += L.self[v];
      out.strength[c] += L.strength[v];
      for (auto [u, w] : L.nbrs[v]) {
        const auto d = comm[u];
        if (d == c) {
          inner += w;
          continue;
        }
        if (link[d] == 0.0) touched.push_back(d);
        link[d] += w;
      }
    }
    out.self[c] += inner / 2.0;
    std::sort(touched.begin(), touched.end());
    for (auto d : touched) {
      out.nbrs[c].emplace_back(d, link[d]);
      link[d] = 0.0;
    }
  }
  return out;
}

}  // namespace

std::size_t Partition::community_count() const {
  if (assignment.empty()) return 0;
  return static_cast<std::size_t>(*std::max_element(assignment.begin(), assignment.end())) + 1;
}

double modularity(const graph::Adjacency& adj, const std::vector<std::uint32_t>& assignment, double resolution) {
  const std::size_t n = adj.node_count();
  if (assignment.size() != n) throw ValidationError("assignment does not cover every node");
  const double m = static_cast<double>(adj.edge_count());
  if (m == 0.0) return 0.0;
  std::size_t count = 0;
  for (auto c : assignment) count = std::max<std::size_t>(count, c + 1);
  std::vector<double> inner(count, 0.0), deg(count, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    deg[assignment[v]] += static_cast<double>(adj.degree(v));
    for (auto p = adj.begin(v); p != adj.end(v); ++p)
      if (*p > v && assignment[*p] == assignment[v]) inner[assignment[v]] += 1.0;
  }
  double q = 0.0;
  for (std::size_t c = 0; c < count; ++c) {
    const double share = deg[c] / (2.0 * m);
    q += inner[c] / m - resolution * share * share;
  }
  return q;
}

double modularity(const graph::MultilayerGraph& g, const std::vector<std::uint32_t>& assignment, double resolution) {
  return modularity(graph::adjacency(g), assignment, resolution);
}

Partition louvain(const graph::Adjacency& adj, const LouvainOptions& options) {
  const std::size_t n = adj.node_count();
  Partition part;
  part.seed = options.seed;
  part.assignment.resize(n);
  std::iota(part.assignment.begin(), part.assignment.end(), 0u);
  if (n == 0 || adj.edge_count() == 0) return part;

  std::mt19937_64 rng(options.seed);
  Level level = from_adjacency(adj);
  while (true) {
    std::vector<std::uint32_t> comm(level.nbrs.size());
    std::iota(comm.begin(), comm.end(), 0u);
    const bool moved = move_nodes(level, comm, options.resolution, rng);
    if (!moved) break;
    comm = renumber(comm);
    const std::size_t count = *std::max_element(comm.begin(), comm.end()) + 1;
    for (auto& a : part.assignment) a = comm[a];
    if (count == level.nbrs.size()) break;
    level = aggregate(level, comm, count);
  }
  part.assignment = renumber(part.assignment);
  part.modularity = modularity(adj, part.assignment, options.resolution);
  return part;
}

Partition louvain(const graph::MultilayerGraph& g, const LouvainOptions& options) {
  return louvain(graph::adjacency(g), options);
}

namespace {

Partition pick_best(std::vector<Partition>& runs) {
  if (runs.empty()) throw ConfigError("at least one seed is required");
  std::size_t best = 0;
  for (std::size_t i = 1; i < runs.size(); ++i)
    if (runs[i].modularity > runs[best].modularity) best = i;
  return std::move(runs[best]);
}

}  // namespace

Partition louvain_best_of(const graph::Adjacency& adj, const std::vector<std::uint64_t>& seeds, double resolution) {
  std::vector<Partition> runs(seeds.size());
  const auto count = static_cast<std::ptrdiff_t>(seeds.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) runs[i] = louvain(adj, {resolution, seeds[i]});
  return pick_best(runs);
}

Partition serial::louvain_best_of(const graph::Adjacency& adj, const std::vector<std::uint64_t>& seeds,
                                  double resolution) {
  std::vector<Partition> runs;
  for (auto s : seeds) runs.push_back(louvain(adj, {resolution, s}));
  return pick_best(runs);
}

CommunityReport community_report(const graph::MultilayerGraph& g, const Partition& partition) {
  CommunityReport report;
  report.modularity = partition.modularity;
  report.communities.resize(partition.community_count());
  for (std::size_t c = 0; c < report.communities.size(); ++c) report.communities[c].id = static_cast<std::uint32_t>(c);
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    auto& s = report.communities.at(partition.assignment.at(v));
    ++s.size;
    ++s.per_layer[static_cast<std::size_t>(g.nodes()[v].layer)];
  }
  return report;
}

void write_community_report(std::ostream& out, const CommunityReport& report) {
  out << "community,size";
  for (auto l : graph::kLayers) out << ',' << graph::layer_tag(l);
  out << '\n';
  for (const auto& c : report.communities) {
    out << c.id << ',' << c.size;
    for (auto k : c.per_layer) out << ',' << k;
    out << '\n';
  }
}

}  // namespace storygraph::communities
