#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "storygraph/annotations.hpp"

namespace storygraph::graph {

enum class LayerKind : std::uint8_t { Character, Location, Keyword, Face, Caption };
inline constexpr std::array<LayerKind, 5> kLayers = {LayerKind::Character, LayerKind::Location,
                                                      LayerKind::Keyword, LayerKind::Face, LayerKind::Caption};

enum class EdgeFamily : std::uint8_t { CC, LL, KK, FF, CaCa, CK, CL, CF, CCa, KL, KF, KCa, LF, LCa, FCa };
inline constexpr std::array<EdgeFamily, 15> kFamilies = {
    EdgeFamily::CC, EdgeFamily::LL, EdgeFamily::KK, EdgeFamily::FF, EdgeFamily::CaCa,
    EdgeFamily::CK, EdgeFamily::CL, EdgeFamily::CF, EdgeFamily::CCa, EdgeFamily::KL,
    EdgeFamily::KF, EdgeFamily::KCa, EdgeFamily::LF, EdgeFamily::LCa, EdgeFamily::FCa};

std::string_view layer_tag(LayerKind l);          // "C", "L", "K", "F", "Ca"
std::string_view layer_name(LayerKind l);         // "character", ...
std::optional<LayerKind> parse_layer(std::string_view tag);  // tag or name, case-insensitive
std::string_view family_name(EdgeFamily f);       // "CC", "CaCa", "FCa", ...
std::optional<EdgeFamily> parse_family(std::string_view name);
EdgeFamily family_of(LayerKind a, LayerKind b);
std::pair<LayerKind, LayerKind> family_layers(EdgeFamily f);
bool family_touches(EdgeFamily f, LayerKind l);

struct NodeRef {
  LayerKind layer = LayerKind::Character;
  std::string id;

  auto operator<=>(const NodeRef&) const = default;
};

using NodeIndex = std::uint32_t;

struct Edge {
  NodeIndex a = 0;  // a < b
  NodeIndex b = 0;
  EdgeFamily family = EdgeFamily::CC;
  std::set<std::size_t> scenes;  // timeline positions that induced the edge
};

// Undirected, unweighted, typed multilayer graph. The family of an edge is
// fixed by its endpoint layers, so each node pair carries at most one edge.
class MultilayerGraph {
 public:
  NodeIndex add_node(LayerKind layer, std::string_view id);
  std::optional<NodeIndex> find(LayerKind layer, std::string_view id) const;

  // Adds or extends the edge between a and b. Self-loops are ignored
  // (returns false).
  bool add_edge(NodeIndex a, NodeIndex b, std::optional<std::size_t> scene = std::nullopt);
  bool add_edge(NodeIndex a, NodeIndex b, EdgeFamily declared, std::optional<std::size_t> scene);
  bool has_edge(NodeIndex a, NodeIndex b) const;
  const Edge* edge_between(NodeIndex a, NodeIndex b) const;

  const std::vector<NodeRef>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t count_nodes(LayerKind l) const;
  std::size_t count_edges(EdgeFamily f) const;

 private:
  static std::uint64_t key(NodeIndex a, NodeIndex b);

  std::vector<NodeRef> nodes_;
  std::unordered_map<std::string, NodeIndex> node_index_;
  std::vector<Edge> edges_;
  std::unordered_map<std::uint64_t, std::size_t> edge_index_;
};

struct BuildOptions {
  // Timeline length; bundles must reference positions below it.
  std::optional<std::size_t> scene_count;
};

MultilayerGraph build(const std::vector<annotations::SceneBundle>& bundles, const BuildOptions& options = {});

// Nodes of the family's layer(s) and that family's edges only.
MultilayerGraph layer_subgraph(const MultilayerGraph& g, EdgeFamily family);

// Removes a layer's nodes and every incident edge.
MultilayerGraph drop_layer(const MultilayerGraph& g, LayerKind layer);

// Named views accepted by the CLI: a family name ("CC", "FCa", ...), "ALL",
// or "ALL_MINUS_CAPTIONS".
MultilayerGraph view(const MultilayerGraph& g, std::string_view name);

// Compact adjacency over node indices (sorted neighbour lists).
struct Adjacency {
  std::vector<std::uint32_t> offsets;  // size n + 1
  std::vector<std::uint32_t> targets;

  std::size_t node_count() const { return offsets.empty() ? 0 : offsets.size() - 1; }
  std::size_t edge_count() const { return targets.size() / 2; }
  std::size_t degree(std::size_t v) const { return offsets[v + 1] - offsets[v]; }
  const std::uint32_t* begin(std::size_t v) const { return targets.data() + offsets[v]; }
  const std::uint32_t* end(std::size_t v) const { return targets.data() + offsets[v + 1]; }

  static Adjacency from_edges(std::size_t n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges);
};

Adjacency adjacency(const MultilayerGraph& g);

}  // namespace storygraph::graph
