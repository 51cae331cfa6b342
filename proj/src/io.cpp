#include "storygraph/io.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <fstream>
#include <json.hpp>
#include <map>
#include <sstream>

#include "storygraph/error.hpp"

namespace storygraph::io {

using nlohmann::json;
using ojson = nlohmann::ordered_json;
namespace pt = boost::property_tree;

namespace {

json parse_json(std::string_view text, const char* what) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    throw ParseError(std::string(what) + ": invalid JSON: " + e.what());
  }
}

template <typename F>
auto schema(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ValidationError(std::string(what) + ": schema violation: " + e.what());
  }
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out.push_back(c);
    }
  }
  return out;
}

std::string scenes_attr(const std::set<std::size_t>& scenes) {
  std::string out;
  for (auto s : scenes) {
    if (!out.empty()) out.push_back(';');
    out += std::to_string(s);
  }
  return out;
}

std::set<std::size_t> parse_scenes_attr(const std::string& s) {
  std::set<std::size_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ';'))
    if (!item.empty()) out.insert(std::stoul(item));
  return out;
}

graph::LayerKind require_layer(const std::optional<std::string>& tag, const std::string& node) {
  if (!tag || tag->empty()) throw ImportError("node '" + node + "' has no layer tag");
  auto l = graph::parse_layer(*tag);
  if (!l) throw ImportError("node '" + node + "' has unknown layer tag '" + *tag + "'");
  return *l;
}

struct PendingEdge {
  std::string a, b;
  std::optional<std::string> family;
  std::set<std::size_t> scenes;
};

void add_pending(graph::MultilayerGraph& g, const std::map<std::string, graph::NodeIndex>& ids,
                 const std::vector<PendingEdge>& edges) {
  for (const auto& e : edges) {
    auto ia = ids.find(e.a), ib = ids.find(e.b);
    if (ia == ids.end() || ib == ids.end())
      throw ImportError("edge " + e.a + " -- " + e.b + " references an unknown node");
    auto fam = graph::family_of(g.nodes()[ia->second].layer, g.nodes()[ib->second].layer);
    if (e.family) {
      auto declared = graph::parse_family(*e.family);
      if (!declared) throw ImportError("edge " + e.a + " -- " + e.b + " has unknown family '" + *e.family + "'");
      if (*declared != fam)
        throw ImportError("edge " + e.a + " -- " + e.b + " declares family " + *e.family + " but joins " +
                          std::string(graph::family_name(fam)) + " layers");
    }
    g.add_edge(ia->second, ib->second, fam, std::nullopt);
    for (auto s : e.scenes) g.add_edge(ia->second, ib->second, fam, s);
  }
}

pt::ptree parse_xml(std::string_view text, const char* what) {
  pt::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw ImportError(std::string(what) + ": " + e.what());
  }
  return tree;
}

std::optional<std::string> attr(const pt::ptree& node, const std::string& name) {
  auto v = node.get_optional<std::string>("<xmlattr>." + name);
  if (!v) return std::nullopt;
  return *v;
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ImportError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << content;
}

std::string scenes_to_json(const std::vector<script::Scene>& scenes) {
  ojson arr = ojson::array();
  for (const auto& s : scenes) {
    ojson heading = {{"setting", script::to_string(s.heading.setting)},
                     {"location", s.heading.location},
                     {"time_of_day", s.heading.time_of_day ? ojson(*s.heading.time_of_day) : ojson(nullptr)},
                     {"raw", s.heading.raw}};
    ojson utts = ojson::array();
    for (const auto& u : s.utterances)
      utts.push_back({{"speaker", u.speaker},
                      {"text", u.text},
                      {"cue", u.cue},
                      {"directions", u.directions},
                      {"after_description", u.after_description}});
    arr.push_back({{"index", s.index},
                   {"heading", heading},
                   {"description", s.description},
                   {"emphasized_terms", s.emphasized_terms},
                   {"utterances", utts}});
  }
  return ojson{{"scenes", arr}}.dump(2) + "\n";
}

std::vector<script::Scene> scenes_from_json(std::string_view text) {
  const json doc = parse_json(text, "scenes");
  return schema("scenes", [&] {
    std::vector<script::Scene> out;
    for (const auto& js : doc.at("scenes")) {
      script::Scene s;
      s.index = js.at("index").get<std::size_t>();
      const auto& h = js.at("heading");
      s.heading.setting = script::setting_from_string(h.at("setting").get<std::string>());
      s.heading.location = h.at("location").get<std::string>();
      if (h.contains("time_of_day") && !h["time_of_day"].is_null())
        s.heading.time_of_day = h["time_of_day"].get<std::string>();
      s.heading.raw = h.value("raw", "");
      s.description = js.value("description", "");
      if (js.contains("emphasized_terms")) s.emphasized_terms = js["emphasized_terms"].get<std::set<std::string>>();
      std::size_t i = 0;
      for (const auto& ju : js.at("utterances")) {
        script::Utterance u;
        u.speaker = ju.at("speaker").get<std::string>();
        u.text = ju.at("text").get<std::string>();
        u.cue = ju.value("cue", u.speaker);
        u.directions = ju.value("directions", "");
        u.after_description = ju.value("after_description", false);
        u.index_in_scene = i++;
        s.utterances.push_back(std::move(u));
      }
      out.push_back(std::move(s));
    }
    return out;
  });
}

std::string subtitles_to_json(const subtitles::SrtParseResult& srt) {
  ojson blocks = ojson::array();
  for (const auto& b : srt.blocks)
    blocks.push_back({{"index", b.index},
                      {"start", subtitles::format_timestamp(b.start_ms)},
                      {"end", subtitles::format_timestamp(b.end_ms)},
                      {"lines", b.lines}});
  return ojson{{"blocks", blocks}, {"warnings", srt.warnings}}.dump(2) + "\n";
}

std::vector<subtitles::SubtitleBlock> subtitles_from_json(std::string_view text) {
  const json doc = parse_json(text, "subtitles");
  return schema("subtitles", [&] {
    std::vector<subtitles::SubtitleBlock> out;
    for (const auto& jb : doc.at("blocks")) {
      subtitles::SubtitleBlock b;
      b.index = jb.at("index").get<int>();
      b.start_ms = subtitles::parse_timestamp(jb.at("start").get<std::string>());
      b.end_ms = subtitles::parse_timestamp(jb.at("end").get<std::string>());
      b.lines = jb.at("lines").get<std::vector<std::string>>();
      out.push_back(std::move(b));
    }
    return out;
  });
}

std::string timeline_to_json(const align::Timeline& timeline) {
  ojson entries = ojson::array();
  for (const auto& e : timeline.entries)
    entries.push_back({{"label", e.label()},
                       {"kind", script::to_string(e.kind)},
                       {"scenes", e.scene_indices},
                       {"start", subtitles::format_timestamp(e.bounds.start_ms)},
                       {"end", subtitles::format_timestamp(e.bounds.end_ms)},
                       {"empty_scenes", e.empty_scenes}});
  ojson matches = ojson::array();
  for (const auto& m : timeline.matches)
    matches.push_back({{"scene", m.scene_index},
                       {"utterance", m.utterance_index},
                       {"blocks", m.subtitle_positions},
                       {"method", align::to_string(m.method)},
                       {"score", m.score}});
  const auto& s = timeline.stats;
  ojson stats = {{"matched", s.matched},       {"boundary_retrieved", s.boundary_retrieved},
                 {"boundary_empty", s.boundary_empty}, {"meta", s.meta},
                 {"meta_empty", s.meta_empty}, {"total", s.total},
                 {"total_empty", s.total_empty}};
  return ojson{{"movie_end", subtitles::format_timestamp(timeline.movie_end_ms)},
               {"stats", stats},
               {"entries", entries},
               {"matches", matches}}
             .dump(2) +
         "\n";
}

align::Timeline timeline_from_json(std::string_view text) {
  const json doc = parse_json(text, "timeline");
  return schema("timeline", [&] {
    align::Timeline t;
    t.movie_end_ms = subtitles::parse_timestamp(doc.at("movie_end").get<std::string>());
    for (const auto& je : doc.at("entries")) {
      align::TimelineEntry e;
      e.kind = script::scene_kind_from_string(je.at("kind").get<std::string>());
      e.scene_indices = je.at("scenes").get<std::vector<std::size_t>>();
      e.bounds = {subtitles::parse_timestamp(je.at("start").get<std::string>()),
                  subtitles::parse_timestamp(je.at("end").get<std::string>())};
      e.empty_scenes = je.value("empty_scenes", std::size_t{0});
      t.entries.push_back(std::move(e));
    }
    if (doc.contains("matches")) {
      for (const auto& jm : doc["matches"]) {
        align::UtteranceMatch m;
        m.scene_index = jm.at("scene").get<std::size_t>();
        m.utterance_index = jm.at("utterance").get<std::size_t>();
        m.subtitle_positions = jm.at("blocks").get<std::vector<std::size_t>>();
        m.method = align::match_method_from_string(jm.at("method").get<std::string>());
        m.score = jm.value("score", 1.0);
        t.matches.push_back(std::move(m));
      }
    }
    t.stats = align::compute_stats(t.entries);
    return t;
  });
}

align::ShotList shots_from_json(std::string_view text) {
  const json doc = parse_json(text, "shots");
  align::ShotList shots = schema("shots", [&] {
    align::ShotList s;
    s.boundaries_ms = doc.at("boundaries_ms").get<std::vector<std::int64_t>>();
    return s;
  });
  shots.validate();
  return shots;
}

std::string graph_to_json(const graph::MultilayerGraph& g, const GraphHeader& header) {
  ojson nodes = ojson::array();
  for (const auto& n : g.nodes()) nodes.push_back({{"layer", graph::layer_tag(n.layer)}, {"id", n.id}});
  ojson edges = ojson::array();
  for (const auto& e : g.edges())
    edges.push_back({{"a", e.a}, {"b", e.b}, {"family", graph::family_name(e.family)}, {"scenes", e.scenes}});
  return ojson{{"seed", header.seed}, {"nodes", nodes}, {"edges", edges}}.dump(2) + "\n";
}

graph::MultilayerGraph graph_from_json(std::string_view text) {
  const json doc = parse_json(text, "graph");
  return schema("graph", [&] {
    graph::MultilayerGraph g;
    std::map<std::string, graph::NodeIndex> ids;
    std::vector<std::string> keys;
    const auto& nodes = doc.at("nodes");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const auto& jn = nodes[i];
      const std::string id = jn.at("id").get<std::string>();
      std::optional<std::string> tag;
      if (jn.contains("layer") && jn["layer"].is_string()) tag = jn["layer"].get<std::string>();
      const auto layer = require_layer(tag, id);
      const std::string key = std::to_string(i);
      ids[key] = g.add_node(layer, id);
      keys.push_back(key);
    }
    std::vector<PendingEdge> edges;
    for (const auto& je : doc.at("edges")) {
      PendingEdge e;
      const auto a = je.at("a").get<std::size_t>(), b = je.at("b").get<std::size_t>();
      if (a >= keys.size() || b >= keys.size()) throw ValidationError("graph: edge endpoint out of range");
      e.a = keys[a];
      e.b = keys[b];
      if (je.contains("family")) e.family = je["family"].get<std::string>();
      if (je.contains("scenes")) e.scenes = je["scenes"].get<std::set<std::size_t>>();
      edges.push_back(std::move(e));
    }
    add_pending(g, ids, edges);
    return g;
  });
}

std::string partition_to_json(const graph::MultilayerGraph& g, const communities::Partition& p, double resolution) {
  std::vector<ojson> members(p.community_count(), ojson::array());
  for (std::size_t v = 0; v < g.node_count(); ++v)
    members.at(p.assignment.at(v)).push_back({{"layer", graph::layer_tag(g.nodes()[v].layer)}, {"id", g.nodes()[v].id}});
  ojson comms = ojson::array();
  for (std::size_t c = 0; c < members.size(); ++c) comms.push_back({{"id", c}, {"members", members[c]}});
  return ojson{{"seed", p.seed}, {"resolution", resolution}, {"modularity", p.modularity}, {"communities", comms}}
             .dump(2) +
         "\n";
}

std::string to_gexf(const graph::MultilayerGraph& g) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<gexf xmlns=\"http://gexf.net/1.3\" version=\"1.3\">\n"
      << "  <graph defaultedgetype=\"undirected\" mode=\"static\">\n"
      << "    <attributes class=\"node\">\n"
      << "      <attribute id=\"0\" title=\"layer\" type=\"string\"/>\n"
      << "    </attributes>\n"
      << "    <attributes class=\"edge\">\n"
      << "      <attribute id=\"0\" title=\"family\" type=\"string\"/>\n"
      << "      <attribute id=\"1\" title=\"scenes\" type=\"string\"/>\n"
      << "    </attributes>\n"
      << "    <nodes>\n";
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const auto& n = g.nodes()[i];
    out << "      <node id=\"n" << i << "\" label=\"" << xml_escape(n.id) << "\"><attvalues><attvalue for=\"0\" value=\""
        << graph::layer_tag(n.layer) << "\"/></attvalues></node>\n";
  }
  out << "    </nodes>\n    <edges>\n";
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    const auto& e = g.edges()[i];
    out << "      <edge id=\"e" << i << "\" source=\"n" << e.a << "\" target=\"n" << e.b
        << "\"><attvalues><attvalue for=\"0\" value=\"" << graph::family_name(e.family)
        << "\"/><attvalue for=\"1\" value=\"" << scenes_attr(e.scenes) << "\"/></attvalues></edge>\n";
  }
  out << "    </edges>\n  </graph>\n</gexf>\n";
  return out.str();
}

graph::MultilayerGraph from_gexf(std::string_view text) {
  const auto tree = parse_xml(text, "gexf");
  const auto& gr = tree.get_child("gexf.graph");
  std::map<std::string, std::string> node_attrs, edge_attrs;  // id -> title
  for (const auto& [tag, child] : gr) {
    if (tag != "attributes") continue;
    auto& target = attr(child, "class").value_or("node") == "edge" ? edge_attrs : node_attrs;
    for (const auto& [t, a] : child)
      if (t == "attribute") target[attr(a, "id").value_or("")] = attr(a, "title").value_or("");
  }
  auto values = [](const pt::ptree& el, const std::map<std::string, std::string>& titles) {
    std::map<std::string, std::string> out;
    if (auto av = el.get_child_optional("attvalues"))
      for (const auto& [t, v] : *av) {
        if (t != "attvalue") continue;
        auto key = attr(v, "for").value_or("");
        auto it = titles.find(key);
        out[it == titles.end() ? key : it->second] = attr(v, "value").value_or("");
      }
    return out;
  };
  graph::MultilayerGraph g;
  std::map<std::string, graph::NodeIndex> ids;
  if (auto nodes = gr.get_child_optional("nodes")) {
    for (const auto& [t, n] : *nodes) {
      if (t != "node") continue;
      const auto id = attr(n, "id").value_or("");
      const auto label = attr(n, "label").value_or(id);
      auto vals = values(n, node_attrs);
      std::optional<std::string> layer;
      if (vals.count("layer")) layer = vals["layer"];
      ids[id] = g.add_node(require_layer(layer, label), label);
    }
  }
  std::vector<PendingEdge> edges;
  if (auto es = gr.get_child_optional("edges")) {
    for (const auto& [t, e] : *es) {
      if (t != "edge") continue;
      PendingEdge pe{attr(e, "source").value_or(""), attr(e, "target").value_or(""), std::nullopt, {}};
      auto vals = values(e, edge_attrs);
      if (vals.count("family")) pe.family = vals["family"];
      if (vals.count("scenes")) pe.scenes = parse_scenes_attr(vals["scenes"]);
      edges.push_back(std::move(pe));
    }
  }
  add_pending(g, ids, edges);
  return g;
}

std::string to_graphml(const graph::MultilayerGraph& g) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
      << "  <key id=\"layer\" for=\"node\" attr.name=\"layer\" attr.type=\"string\"/>\n"
      << "  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n"
      << "  <key id=\"family\" for=\"edge\" attr.name=\"family\" attr.type=\"string\"/>\n"
      << "  <key id=\"scenes\" for=\"edge\" attr.name=\"scenes\" attr.type=\"string\"/>\n"
      << "  <graph id=\"G\" edgedefault=\"undirected\">\n";
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const auto& n = g.nodes()[i];
    out << "    <node id=\"n" << i << "\"><data key=\"layer\">" << graph::layer_tag(n.layer)
        << "</data><data key=\"label\">" << xml_escape(n.id) << "</data></node>\n";
  }
  for (const auto& e : g.edges())
    out << "    <edge source=\"n" << e.a << "\" target=\"n" << e.b << "\"><data key=\"family\">"
        << graph::family_name(e.family) << "</data><data key=\"scenes\">" << scenes_attr(e.scenes)
        << "</data></edge>\n";
  out << "  </graph>\n</graphml>\n";
  return out.str();
}

graph::MultilayerGraph from_graphml(std::string_view text) {
  const auto tree = parse_xml(text, "graphml");
  const auto& root = tree.get_child("graphml");
  std::map<std::string, std::string> keys;  // key id -> attr.name
  for (const auto& [t, k] : root)
    if (t == "key") keys[attr(k, "id").value_or("")] = attr(k, "attr.name").value_or(attr(k, "id").value_or(""));
  auto data = [&](const pt::ptree& el) {
    std::map<std::string, std::string> out;
    for (const auto& [t, d] : el) {
      if (t != "data") continue;
      auto key = attr(d, "key").value_or("");
      auto it = keys.find(key);
      out[it == keys.end() ? key : it->second] = d.get_value<std::string>();
    }
    return out;
  };
  graph::MultilayerGraph g;
  std::map<std::string, graph::NodeIndex> ids;
  std::vector<PendingEdge> edges;
  const auto& gr = root.get_child("graph");
  for (const auto& [t, el] : gr) {
    if (t == "node") {
      const auto id = attr(el, "id").value_or("");
      auto vals = data(el);
      const std::string label = vals.count("label") ? vals["label"] : id;
      std::optional<std::string> layer;
      if (vals.count("layer")) layer = vals["layer"];
      ids[id] = g.add_node(require_layer(layer, label), label);
    } else if (t == "edge") {
      PendingEdge pe{attr(el, "source").value_or(""), attr(el, "target").value_or(""), std::nullopt, {}};
      auto vals = data(el);
      if (vals.count("family")) pe.family = vals["family"];
      if (vals.count("scenes")) pe.scenes = parse_scenes_attr(vals["scenes"]);
      edges.push_back(std::move(pe));
    }
  }
  add_pending(g, ids, edges);
  return g;
}

graph::MultilayerGraph import_released_dataset(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  const std::string ext = path.extension().string();
  if (ext == ".gexf") return from_gexf(text);
  if (ext == ".graphml" || ext == ".xml") return from_graphml(text);
  if (ext == ".json") return graph_from_json(text);
  throw ImportError("unsupported network format '" + ext + "' for " + path.string());
}

}  // namespace storygraph::io
