#include "storygraph/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>

#include "metrics_detail.hpp"

namespace storygraph::metrics {
namespace detail {

void accumulate_source(const graph::Adjacency& adj, std::size_t s, BrandesWork& w, std::vector<double>& acc) {
  std::size_t head = 0, tail = 0, visited = 0;
  w.dist[s] = 0;
  w.sigma[s] = 1.0;
  w.queue[tail++] = static_cast<std::uint32_t>(s);
  while (head < tail) {
    const auto v = w.queue[head++];
    w.order[visited++] = v;
    for (auto p = adj.begin(v); p != adj.end(v); ++p) {
      const auto u = *p;
      if (w.dist[u] < 0) {
        w.dist[u] = w.dist[v] + 1;
        w.sigma[u] = 0.0;
        w.delta[u] = 0.0;
        w.queue[tail++] = u;
      }
      if (w.dist[u] == w.dist[v] + 1) w.sigma[u] += w.sigma[v];
    }
  }
  w.delta[s] = 0.0;
  for (std::size_t i = visited; i-- > 0;) {
    const auto v = w.order[i];
    double d = 0.0;
    for (auto p = adj.begin(v); p != adj.end(v); ++p) {
      const auto u = *p;
      if (w.dist[u] == w.dist[v] + 1) d += w.sigma[v] / w.sigma[u] * (1.0 + w.delta[u]);
    }
    w.delta[v] = d;
    if (v != s) acc[v] += d;
  }
  for (std::size_t i = 0; i < visited; ++i) w.dist[w.order[i]] = -1;
}

std::vector<double> finish_eigen(const graph::Adjacency& adj, std::vector<double> x) {
  double peak = 0.0;
  for (std::size_t v = 0; v < x.size(); ++v) {
    if (adj.degree(v) == 0) x[v] = 0.0;
    peak = std::max(peak, x[v]);
  }
  if (peak > 0.0)
    for (auto& v : x) v /= peak;
  return x;
}

namespace {

std::vector<std::uint32_t> component_labels(const graph::Adjacency& adj, std::size_t& count) {
  const std::size_t n = adj.node_count();
  std::vector<std::uint32_t> label(n, UINT32_MAX);
  std::vector<std::uint32_t> stack;
  count = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (label[s] != UINT32_MAX) continue;
    const auto c = static_cast<std::uint32_t>(count++);
    label[s] = c;
    stack.push_back(static_cast<std::uint32_t>(s));
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      for (auto p = adj.begin(v); p != adj.end(v); ++p) {
        if (label[*p] == UINT32_MAX) {
          label[*p] = c;
          stack.push_back(*p);
        }
      }
    }
  }
  return label;
}

}  // namespace

TopologyStats topology_base(const graph::Adjacency& adj) {
  TopologyStats st;
  st.node_count = adj.node_count();
  st.edge_count = adj.edge_count();
  if (st.node_count == 0) return st;
  if (st.node_count >= 2) {
    const double n = static_cast<double>(st.node_count);
    st.density = 2.0 * static_cast<double>(st.edge_count) / (n * (n - 1.0));
  }
  component_labels(adj, st.connected_components);

  __int128 arcs = 0, sx = 0, sxx = 0, sxy = 0;
  for (std::size_t v = 0; v < st.node_count; ++v) {
    const auto dv = static_cast<__int128>(adj.degree(v));
    for (auto p = adj.begin(v); p != adj.end(v); ++p) {
      const auto du = static_cast<__int128>(adj.degree(*p));
      ++arcs;
      sx += dv;
      sxx += dv * dv;
      sxy += dv * du;
    }
  }
  const __int128 den = arcs * sxx - sx * sx;
  if (arcs > 0 && den > 0) {
    st.assortativity_defined = true;
    st.degree_assortativity = static_cast<double>(static_cast<long double>(arcs * sxy - sx * sx) /
                                                  static_cast<long double>(den));
  }
  return st;
}

std::vector<std::uint32_t> largest_component(const graph::Adjacency& adj) {
  std::size_t count = 0;
  const auto label = component_labels(adj, count);
  std::vector<std::size_t> sizes(count, 0);
  for (auto c : label) ++sizes[c];
  const auto best = static_cast<std::uint32_t>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  std::vector<std::uint32_t> out;
  for (std::size_t v = 0; v < label.size(); ++v)
    if (label[v] == best) out.push_back(static_cast<std::uint32_t>(v));
  return out;
}

std::pair<std::uint64_t, std::size_t> bfs_distances(const graph::Adjacency& adj, std::size_t s,
                                                    std::vector<std::int64_t>& dist) {
  std::vector<std::uint32_t> queue{static_cast<std::uint32_t>(s)};
  dist[s] = 0;
  std::uint64_t total = 0;
  std::size_t ecc = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const auto v = queue[head];
    total += static_cast<std::uint64_t>(dist[v]);
    ecc = std::max(ecc, static_cast<std::size_t>(dist[v]));
    for (auto p = adj.begin(v); p != adj.end(v); ++p) {
      if (dist[*p] < 0) {
        dist[*p] = dist[v] + 1;
        queue.push_back(*p);
      }
    }
  }
  for (auto v : queue) dist[v] = -1;
  return {total, ecc};
}

void finish_paths(TopologyStats& st, std::size_t lcc_size, std::uint64_t total, std::size_t diameter) {
  st.lcc_size = lcc_size;
  if (lcc_size < 2) return;
  const double k = static_cast<double>(lcc_size);
  st.avg_shortest_path = static_cast<double>(total) / (k * (k - 1.0));
  st.diameter = diameter;
}

double local_clustering(const graph::Adjacency& adj, std::size_t v) {
  const std::size_t k = adj.degree(v);
  if (k < 2) return 0.0;
  std::size_t links = 0;
  for (auto p = adj.begin(v); p != adj.end(v); ++p) {
    const auto u = *p;
    // |N(v) ∩ N(u)| via sorted merge
    auto a = adj.begin(v), ae = adj.end(v);
    auto b = adj.begin(u), be = adj.end(u);
    while (a != ae && b != be) {
      if (*a < *b) {
        ++a;
      } else if (*b < *a) {
        ++b;
      } else {
        ++links;
        ++a;
        ++b;
      }
    }
  }
  // each neighbour edge counted from both ends
  return static_cast<double>(links) / static_cast<double>(k * (k - 1));
}

}  // namespace detail

std::vector<std::size_t> degree(const graph::Adjacency& adj) {
  std::vector<std::size_t> out(adj.node_count());
  for (std::size_t v = 0; v < out.size(); ++v) out[v] = adj.degree(v);
  return out;
}

TopologyStats topology(const graph::MultilayerGraph& g) { return topology(graph::adjacency(g)); }

std::vector<double> fractional_ranks(const std::vector<double>& values, double tol) {
  const std::size_t n = values.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  auto tied = [tol](double a, double b) {
    return a == b || std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
  };
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && tied(values[idx[i]], values[idx[j]])) ++j;
    const double r = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[idx[k]] = r;
    i = j;
  }
  return ranks;
}

InfluenceRanking rank_influence(const std::vector<NodeMetrics>& nodes) {
  std::vector<double> deg, btw, eig;
  for (const auto& n : nodes) {
    deg.push_back(n.degree);
    btw.push_back(n.betweenness);
    eig.push_back(n.eigenvector);
  }
  const auto rd = fractional_ranks(deg), rb = fractional_ranks(btw), re = fractional_ranks(eig);
  InfluenceRanking out;
  out.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i)
    out.push_back({nodes[i], rd[i], rb[i], re[i], (rd[i] + rb[i] + re[i]) / 3.0});
  std::sort(out.begin(), out.end(), [](const InfluenceRow& a, const InfluenceRow& b) {
    if (a.influence != b.influence) return a.influence < b.influence;
    if (a.node.id != b.node.id) return a.node.id < b.node.id;
    return a.node.layer < b.node.layer;
  });
  return out;
}

InfluenceRanking influence_scores(const graph::MultilayerGraph& g, const EigenOptions& options) {
  const auto adj = graph::adjacency(g);
  const auto btw = betweenness(adj);
  const auto eig = eigenvector_centrality(adj, options);
  std::vector<NodeMetrics> nodes;
  nodes.reserve(g.node_count());
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    const auto& ref = g.nodes()[v];
    nodes.push_back({ref.id, std::string(graph::layer_tag(ref.layer)), static_cast<double>(adj.degree(v)), btw[v],
                     eig[v]});
  }
  return rank_influence(nodes);
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

void write_influence_csv(std::ostream& out, const InfluenceRanking& ranking, std::optional<std::size_t> top) {
  out << "node,layer,degree,betweenness,eigen,rank_deg,rank_btw,rank_eig,influence\n";
  const std::size_t n = top ? std::min(*top, ranking.size()) : ranking.size();
  out << std::fixed;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = ranking[i];
    out << csv_field(r.node.id) << ',' << r.node.layer << ',' << std::setprecision(0) << r.node.degree << ','
        << std::setprecision(6) << r.node.betweenness << ',' << r.node.eigenvector << ',' << std::setprecision(1)
        << r.rank_deg << ',' << r.rank_btw << ',' << r.rank_eig << ',' << std::setprecision(4) << r.influence
        << '\n';
  }
  out.unsetf(std::ios::floatfield);
}

void write_topology_csv(std::ostream& out, const std::vector<std::pair<std::string, TopologyStats>>& rows) {
  out << "graph,nodes,edges,density,diameter,avg_shortest_path,avg_clustering,assortativity,assortativity_defined,"
         "components,lcc_size\n";
  out << std::fixed << std::setprecision(6);
  for (const auto& [name, st] : rows) {
    out << csv_field(name) << ',' << st.node_count << ',' << st.edge_count << ',' << st.density << ',' << st.diameter
        << ',' << st.avg_shortest_path << ',' << st.avg_clustering << ',' << st.degree_assortativity << ','
        << (st.assortativity_defined ? "true" : "false") << ',' << st.connected_components << ',' << st.lcc_size
        << '\n';
  }
  out.unsetf(std::ios::floatfield);
}

}  // namespace storygraph::metrics
