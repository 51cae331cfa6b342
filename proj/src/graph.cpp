#include "storygraph/graph.hpp"

#include <algorithm>
#include <cctype>

#include "storygraph/error.hpp"

namespace storygraph::graph {
namespace {

struct FamilyInfo {
  EdgeFamily family;
  std::string_view name;
  LayerKind a;
  LayerKind b;
};

constexpr FamilyInfo kFamilyTable[] = {
    {EdgeFamily::CC, "CC", LayerKind::Character, LayerKind::Character},
    {EdgeFamily::LL, "LL", LayerKind::Location, LayerKind::Location},
    {EdgeFamily::KK, "KK", LayerKind::Keyword, LayerKind::Keyword},
    {EdgeFamily::FF, "FF", LayerKind::Face, LayerKind::Face},
    {EdgeFamily::CaCa, "CaCa", LayerKind::Caption, LayerKind::Caption},
    {EdgeFamily::CK, "CK", LayerKind::Character, LayerKind::Keyword},
    {EdgeFamily::CL, "CL", LayerKind::Character, LayerKind::Location},
    {EdgeFamily::CF, "CF", LayerKind::Character, LayerKind::Face},
    {EdgeFamily::CCa, "CCa", LayerKind::Character, LayerKind::Caption},
    {EdgeFamily::KL, "KL", LayerKind::Keyword, LayerKind::Location},
    {EdgeFamily::KF, "KF", LayerKind::Keyword, LayerKind::Face},
    {EdgeFamily::KCa, "KCa", LayerKind::Keyword, LayerKind::Caption},
    {EdgeFamily::LF, "LF", LayerKind::Location, LayerKind::Face},
    {EdgeFamily::LCa, "LCa", LayerKind::Location, LayerKind::Caption},
    {EdgeFamily::FCa, "FCa", LayerKind::Face, LayerKind::Caption},
};

std::string node_key(LayerKind l, std::string_view id) {
  std::string k(layer_tag(l));
  k.push_back('\x1f');
  k.append(id);
  return k;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

template <typename Keep>
MultilayerGraph filtered(const MultilayerGraph& g, Keep keep_node, std::optional<EdgeFamily> only_family) {
  MultilayerGraph out;
  std::vector<std::optional<NodeIndex>> remap(g.node_count());
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const auto& n = g.nodes()[i];
    if (keep_node(n)) remap[i] = out.add_node(n.layer, n.id);
  }
  for (const auto& e : g.edges()) {
    if (only_family && e.family != *only_family) continue;
    if (!remap[e.a] || !remap[e.b]) continue;
    out.add_edge(*remap[e.a], *remap[e.b], e.family, std::nullopt);
    if (e.scenes.empty()) continue;
    for (auto s : e.scenes) out.add_edge(*remap[e.a], *remap[e.b], e.family, s);
  }
  return out;
}

}  // namespace

std::string_view layer_tag(LayerKind l) {
  switch (l) {
    case LayerKind::Character:
      return "C";
    case LayerKind::Location:
      return "L";
    case LayerKind::Keyword:
      return "K";
    case LayerKind::Face:
      return "F";
    case LayerKind::Caption:
      return "Ca";
  }
  return "?";
}

std::string_view layer_name(LayerKind l) {
  switch (l) {
    case LayerKind::Character:
      return "character";
    case LayerKind::Location:
      return "location";
    case LayerKind::Keyword:
      return "keyword";
    case LayerKind::Face:
      return "face";
    case LayerKind::Caption:
      return "caption";
  }
  return "?";
}

std::optional<LayerKind> parse_layer(std::string_view tag) {
  std::string t = lower(tag);
  for (auto l : kLayers) {
    if (t == lower(layer_tag(l)) || t == layer_name(l)) return l;
  }
  return std::nullopt;
}

std::string_view family_name(EdgeFamily f) { return kFamilyTable[static_cast<std::size_t>(f)].name; }

std::optional<EdgeFamily> parse_family(std::string_view name) {
  for (const auto& info : kFamilyTable)
    if (info.name == name) return info.family;
  std::string l = lower(name);
  for (const auto& info : kFamilyTable)
    if (lower(info.name) == l) return info.family;
  return std::nullopt;
}

EdgeFamily family_of(LayerKind a, LayerKind b) {
  for (const auto& info : kFamilyTable)
    if ((info.a == a && info.b == b) || (info.a == b && info.b == a)) return info.family;
  throw BuildError("no edge family for layer pair");
}

std::pair<LayerKind, LayerKind> family_layers(EdgeFamily f) {
  const auto& info = kFamilyTable[static_cast<std::size_t>(f)];
  return {info.a, info.b};
}

bool family_touches(EdgeFamily f, LayerKind l) {
  auto [a, b] = family_layers(f);
  return a == l || b == l;
}

std::uint64_t MultilayerGraph::key(NodeIndex a, NodeIndex b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

NodeIndex MultilayerGraph::add_node(LayerKind layer, std::string_view id) {
  if (id.empty()) throw BuildError("node id must not be empty");
  auto [it, inserted] = node_index_.emplace(node_key(layer, id), static_cast<NodeIndex>(nodes_.size()));
  if (inserted) nodes_.push_back({layer, std::string(id)});
  return it->second;
}

std::optional<NodeIndex> MultilayerGraph::find(LayerKind layer, std::string_view id) const {
  auto it = node_index_.find(node_key(layer, id));
  if (it == node_index_.end()) return std::nullopt;
  return it->second;
}

bool MultilayerGraph::add_edge(NodeIndex a, NodeIndex b, std::optional<std::size_t> scene) {
  return add_edge(a, b, family_of(nodes_.at(a).layer, nodes_.at(b).layer), scene);
}

bool MultilayerGraph::add_edge(NodeIndex a, NodeIndex b, EdgeFamily declared, std::optional<std::size_t> scene) {
  if (a == b) return false;
  EdgeFamily f = family_of(nodes_.at(a).layer, nodes_.at(b).layer);
  if (f != declared)
    throw BuildError("edge family " + std::string(family_name(declared)) + " does not match endpoints " +
                     nodes_[a].id + " (" + std::string(layer_tag(nodes_[a].layer)) + ") and " + nodes_[b].id +
                     " (" + std::string(layer_tag(nodes_[b].layer)) + ")");
  auto [it, inserted] = edge_index_.emplace(key(a, b), edges_.size());
  if (inserted) edges_.push_back({std::min(a, b), std::max(a, b), f, {}});
  if (scene) edges_[it->second].scenes.insert(*scene);
  return true;
}

bool MultilayerGraph::has_edge(NodeIndex a, NodeIndex b) const { return edge_index_.count(key(a, b)) > 0; }

const Edge* MultilayerGraph::edge_between(NodeIndex a, NodeIndex b) const {
  auto it = edge_index_.find(key(a, b));
  return it == edge_index_.end() ? nullptr : &edges_[it->second];
}

std::size_t MultilayerGraph::count_nodes(LayerKind l) const {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [l](const NodeRef& n) { return n.layer == l; }));
}

std::size_t MultilayerGraph::count_edges(EdgeFamily f) const {
  return static_cast<std::size_t>(std::count_if(edges_.begin(), edges_.end(), [f](const Edge& e) { return e.family == f; }));
}

MultilayerGraph build(const std::vector<annotations::SceneBundle>& bundles, const BuildOptions& options) {
  MultilayerGraph g;
  std::set<std::size_t> seen;
  std::optional<NodeIndex> last_location;

  auto add_all = [&](LayerKind layer, const std::set<std::string>& ids) {
    std::vector<NodeIndex> out;
    for (const auto& id : ids) out.push_back(g.add_node(layer, id));
    return out;
  };
  auto connect = [&](const std::vector<NodeIndex>& xs, const std::vector<NodeIndex>& ys, std::size_t scene) {
    for (auto x : xs)
      for (auto y : ys) g.add_edge(x, y, scene);
  };
  auto clique = [&](const std::vector<NodeIndex>& xs, std::size_t scene) {
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (std::size_t j = i + 1; j < xs.size(); ++j) g.add_edge(xs[i], xs[j], scene);
  };

  for (const auto& b : bundles) {
    const std::size_t s = b.scene_index;
    if (options.scene_count && s >= *options.scene_count)
      throw BuildError("bundle references unknown scene " + std::to_string(s));
    if (!seen.insert(s).second) throw BuildError("scene " + std::to_string(s) + " bundled twice");

    const auto chars = add_all(LayerKind::Character, b.characters);
    const auto faces = add_all(LayerKind::Face, b.faces);
    const auto caps = add_all(LayerKind::Caption, b.kept_captions);
    const auto keys = add_all(LayerKind::Keyword, b.keywords);
    std::vector<NodeIndex> loc;
    if (b.location && !b.location->empty()) loc.push_back(g.add_node(LayerKind::Location, *b.location));

    for (const auto& conv : b.conversations) {
      std::vector<NodeIndex> parts, conv_keys;
      for (const auto& p : conv.participants) parts.push_back(g.add_node(LayerKind::Character, p));
      for (const auto& k : conv.keywords) conv_keys.push_back(g.add_node(LayerKind::Keyword, k));
      clique(parts, s);       // CC
      clique(conv_keys, s);   // KK
      connect(conv_keys, loc, s);  // KL
      for (const auto& [speaker, said] : conv.speaker_keywords) {
        std::vector<NodeIndex> sp = {g.add_node(LayerKind::Character, speaker)};
        connect(sp, add_all(LayerKind::Keyword, said), s);  // CK
      }
    }

    // LL: consecutive located scenes; scenes without a location are transparent.
    if (!loc.empty()) {
      if (last_location && *last_location != loc.front()) g.add_edge(*last_location, loc.front(), s);
      last_location = loc.front();
    }

    clique(faces, s);        // FF
    clique(caps, s);         // CaCa
    connect(chars, loc, s);  // CL
    connect(chars, faces, s);
    connect(chars, caps, s);
    connect(keys, faces, s);
    connect(keys, caps, s);
    connect(loc, faces, s);
    connect(loc, caps, s);
    connect(faces, caps, s);
  }
  return g;
}

MultilayerGraph layer_subgraph(const MultilayerGraph& g, EdgeFamily family) {
  auto [a, b] = family_layers(family);
  return filtered(
      g, [a = a, b = b](const NodeRef& n) { return n.layer == a || n.layer == b; }, family);
}

MultilayerGraph drop_layer(const MultilayerGraph& g, LayerKind layer) {
  return filtered(
      g, [layer](const NodeRef& n) { return n.layer != layer; }, std::nullopt);
}

MultilayerGraph view(const MultilayerGraph& g, std::string_view name) {
  if (name == "ALL") return g;
  if (name == "ALL_MINUS_CAPTIONS") return drop_layer(g, LayerKind::Caption);
  if (auto f = parse_family(name)) return layer_subgraph(g, *f);
  throw ConfigError("unknown graph view '" + std::string(name) + "' (expected a family such as CC, ALL, or ALL_MINUS_CAPTIONS)");
}

Adjacency Adjacency::from_edges(std::size_t n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges) {
  Adjacency adj;
  adj.offsets.assign(n + 1, 0);
  for (auto [a, b] : edges) {
    ++adj.offsets[a + 1];
    ++adj.offsets[b + 1];
  }
  for (std::size_t i = 0; i < n; ++i) adj.offsets[i + 1] += adj.offsets[i];
  adj.targets.resize(adj.offsets[n]);
  std::vector<std::uint32_t> fill(adj.offsets.begin(), adj.offsets.end() - 1);
  for (auto [a, b] : edges) {
    adj.targets[fill[a]++] = b;
    adj.targets[fill[b]++] = a;
  }
  for (std::size_t i = 0; i < n; ++i)
    std::sort(adj.targets.begin() + adj.offsets[i], adj.targets.begin() + adj.offsets[i + 1]);
  return adj;
}

Adjacency adjacency(const MultilayerGraph& g) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  edges.reserve(g.edge_count());
  for (const auto& e : g.edges()) edges.emplace_back(e.a, e.b);
  return Adjacency::from_edges(g.node_count(), edges);
}

}  // namespace storygraph::graph
