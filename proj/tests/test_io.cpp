#include <doctest.h>

#include <filesystem>

#include "fixtures.hpp"
#include "storygraph/error.hpp"
#include "storygraph/io.hpp"
#include "storygraph/script.hpp"
#include "storygraph/subtitles.hpp"

using namespace storygraph;
using graph::LayerKind;
using graph::MultilayerGraph;

namespace {

MultilayerGraph sample_graph() {
  MultilayerGraph g;
  auto a = g.add_node(LayerKind::Character, "R2-D2");
  auto b = g.add_node(LayerKind::Character, "C & \"3PO\"");
  auto l = g.add_node(LayerKind::Location, "MOS <EISLEY>");
  auto k = g.add_node(LayerKind::Keyword, "droid");
  auto f = g.add_node(LayerKind::Face, "FACE_1");
  auto c = g.add_node(LayerKind::Caption, "a|droid|sand|stand");
  g.add_node(LayerKind::Keyword, "lonely");
  g.add_edge(a, b, 0);
  g.add_edge(a, b, 4);
  g.add_edge(a, l, 1);
  g.add_edge(k, l, 1);
  g.add_edge(f, c, 2);
  g.add_edge(b, f, 3);
  return g;
}

void check_same(const MultilayerGraph& x, const MultilayerGraph& y) {
  REQUIRE(x.node_count() == y.node_count());
  REQUIRE(x.edge_count() == y.edge_count());
  for (const auto& n : x.nodes()) CHECK(y.find(n.layer, n.id));
  for (const auto& e : x.edges()) {
    const auto& na = x.nodes()[e.a];
    const auto& nb = x.nodes()[e.b];
    auto ia = y.find(na.layer, na.id), ib = y.find(nb.layer, nb.id);
    REQUIRE(ia);
    REQUIRE(ib);
    const auto* other = y.edge_between(*ia, *ib);
    REQUIRE(other);
    CHECK(other->family == e.family);
    CHECK(other->scenes == e.scenes);
  }
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("scenes round trip") {
    auto scenes = script::chunk_scenes(read_fixture("sample_script.txt"));
    auto json = io::scenes_to_json(scenes);
    auto back = io::scenes_from_json(json);
    REQUIRE(back.size() == scenes.size());
    CHECK(io::scenes_to_json(back) == json);
    CHECK(back[1].heading.location == scenes[1].heading.location);
    CHECK(back[1].utterances.size() == scenes[1].utterances.size());
  }

  TEST_CASE("subtitles round trip") {
    auto srt = subtitles::parse_srt(read_fixture("sample.srt"));
    auto back = io::subtitles_from_json(io::subtitles_to_json(srt));
    CHECK(back == srt.blocks);
  }

  TEST_CASE("timeline round trip") {
    auto scenes = script::chunk_scenes(read_fixture("sample_script.txt"));
    auto srt = subtitles::parse_srt(read_fixture("sample.srt"));
    auto shots = io::shots_from_json(read_fixture("shots.json"));
    auto t = align::align(scenes, srt.blocks, shots);
    auto json = io::timeline_to_json(t);
    auto back = io::timeline_from_json(json);
    CHECK(back.stats == t.stats);
    CHECK(io::timeline_to_json(back) == json);
  }

  TEST_CASE("graph formats round trip") {
    auto g = sample_graph();
    check_same(g, io::graph_from_json(io::graph_to_json(g, {7})));
    check_same(g, io::from_gexf(io::to_gexf(g)));
    check_same(g, io::from_graphml(io::to_graphml(g)));
    CHECK(io::graph_to_json(io::graph_from_json(io::graph_to_json(g))) == io::graph_to_json(g));
  }

  TEST_CASE("malformed input") {
    CHECK_THROWS_AS(io::graph_from_json("{not json"), ParseError);
    CHECK_THROWS_AS(io::graph_from_json(R"({"nodes": 3})"), ValidationError);
    CHECK_THROWS_AS(io::shots_from_json(R"({"boundaries_ms": [5, 2]})"), ValidationError);
    CHECK_THROWS_AS(io::read_file("/nonexistent/graph.json"), ImportError);
    CHECK_THROWS_AS(io::import_released_dataset("/nonexistent/net.gexf"), ImportError);
  }

  TEST_CASE("imported nodes need a known layer") {
    const std::string missing = R"(<?xml version="1.0"?>
<gexf xmlns="http://gexf.net/1.3" version="1.3"><graph defaultedgetype="undirected">
<attributes class="node"><attribute id="layer" title="layer" type="string"/></attributes>
<nodes><node id="0" label="LUKE"><attvalues><attvalue for="layer" value="C"/></attvalues></node>
<node id="1" label="LEIA"/></nodes><edges/></graph></gexf>)";
    try {
      io::from_gexf(missing);
      FAIL("expected ImportError");
    } catch (const ImportError& e) {
      CHECK(std::string(e.what()).find("LEIA") != std::string::npos);
    }
    std::string unknown = missing;
    unknown.replace(unknown.find("<node id=\"1\" label=\"LEIA\"/>"), 27,
                    R"(<node id="1" label="LEIA"><attvalues><attvalue for="layer" value="Q"/></attvalues></node>)");
    try {
      io::from_gexf(unknown);
      FAIL("expected ImportError");
    } catch (const ImportError& e) {
      CHECK(std::string(e.what()).find("LEIA") != std::string::npos);
    }
  }

  TEST_CASE("declared family must match the endpoints") {
    const std::string text = R"({"nodes":[{"layer":"C","id":"A"},{"layer":"L","id":"B"}],
      "edges":[{"a":0,"b":1,"family":"CC","scenes":[0]}]})";
    CHECK_THROWS_AS(io::graph_from_json(text), ImportError);
  }

  TEST_CASE("partition json") {
    auto g = sample_graph();
    communities::Partition p;
    p.assignment = {0, 0, 0, 0, 1, 1, 2};
    p.seed = 9;
    p.modularity = communities::modularity(g, p.assignment);
    auto json = io::partition_to_json(g, p);
    CHECK(json.find("\"seed\": 9") != std::string::npos);
    CHECK(json.back() == '\n');
  }

  TEST_CASE("two speakers make one edge") {
    graph::BuildOptions opts;
    annotations::SceneBundle b;
    b.characters = {"HAN", "CHEWIE"};
    annotations::BundleConversation conv;
    conv.participants = b.characters;
    b.conversations.push_back(conv);
    auto g = graph::build({b}, opts);
    CHECK(g.node_count() == 2);
    CHECK(g.count_edges(graph::EdgeFamily::CC) == 1);
  }

  TEST_CASE("file helpers") {
    auto dir = std::filesystem::temp_directory_path() / "storygraph_io_test";
    std::filesystem::create_directories(dir);
    io::write_file(dir / "g.gexf", io::to_gexf(sample_graph()));
    check_same(sample_graph(), io::import_released_dataset(dir / "g.gexf"));
    io::write_file(dir / "g.json", io::graph_to_json(sample_graph()));
    check_same(sample_graph(), io::import_released_dataset(dir / "g.json"));
    std::filesystem::remove_all(dir);
  }
}
