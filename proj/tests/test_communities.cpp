#include <doctest.h>

#include <numeric>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "storygraph/communities.hpp"

using namespace storygraph;
using namespace storygraph::communities;
using graph::Adjacency;

namespace {

Adjacency two_triangles() { return Adjacency::from_edges(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}}); }

}  // namespace

TEST_SUITE("communities") {
  TEST_CASE("disjoint triangles") {
    auto p = louvain(two_triangles());
    CHECK(p.community_count() == 2);
    CHECK(p.modularity == 0.5);
    CHECK(p.assignment == std::vector<std::uint32_t>{0, 0, 0, 1, 1, 1});
  }

  TEST_CASE("complete graph is one community") {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> e;
    for (std::uint32_t a = 0; a < 5; ++a)
      for (std::uint32_t b = a + 1; b < 5; ++b) e.emplace_back(a, b);
    auto p = louvain(Adjacency::from_edges(5, e));
    CHECK(p.community_count() == 1);
    CHECK(p.modularity == doctest::Approx(0.0));
  }

  TEST_CASE("edgeless graph keeps singletons") {
    auto p = louvain(Adjacency::from_edges(4, {}));
    CHECK(p.community_count() == 4);
    CHECK(p.modularity == 0.0);
    CHECK(louvain(Adjacency::from_edges(0, {})).community_count() == 0);
  }

  TEST_CASE("modularity bounds") {
    auto k = karate();
    std::vector<std::uint32_t> single(34), one(34, 0);
    std::iota(single.begin(), single.end(), 0u);
    CHECK(modularity(k, single) <= 0.0);
    CHECK(modularity(k, one) == doctest::Approx(0.0));
    CHECK_THROWS(modularity(k, std::vector<std::uint32_t>(3, 0)));
  }

  TEST_CASE("karate club") {
    auto p = louvain_best_of(karate(), {1, 2, 3, 4, 5, 6, 7, 8});
    CHECK(p.modularity >= 0.40);
    CHECK(p.modularity <= 1.0);
    CHECK(std::abs(p.modularity - modularity(karate(), p.assignment)) <= 1e-12);
  }

  TEST_CASE("determinism and seed bookkeeping") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t n = 5 + rng() % 60;
      auto adj = Adjacency::from_edges(n, oracle::random_connected(n, rng, 0.08));
      const std::uint64_t seed = rng();
      auto a = louvain(adj, {1.0, seed}), b = louvain(adj, {1.0, seed});
      CHECK(a.assignment == b.assignment);
      CHECK(a.seed == seed);
      CHECK(std::abs(a.modularity - modularity(adj, a.assignment)) <= 1e-12);
      // ids contiguous by first appearance
      std::uint32_t next = 0;
      for (auto c : a.assignment) {
        CHECK(c <= next);
        if (c == next) ++next;
      }
      std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6};
      auto par = louvain_best_of(adj, seeds), ser = serial::louvain_best_of(adj, seeds);
      CHECK(par.assignment == ser.assignment);
      CHECK(par.seed == ser.seed);
    }
  }

  TEST_CASE("resolution shifts granularity") {
    auto k = karate();
    auto coarse = louvain(k, {0.3, 1}), fine = louvain(k, {3.0, 1});
    CHECK(coarse.community_count() <= fine.community_count());
  }

  TEST_CASE("report by layer") {
    graph::MultilayerGraph g;
    auto a = g.add_node(graph::LayerKind::Character, "A");
    auto b = g.add_node(graph::LayerKind::Location, "HOUSE");
    auto c = g.add_node(graph::LayerKind::Keyword, "rain");
    g.add_edge(a, b);
    g.add_edge(b, c);
    Partition p;
    p.assignment = {0, 0, 1};
    p.modularity = modularity(g, p.assignment);
    auto report = community_report(g, p);
    REQUIRE(report.communities.size() == 2);
    CHECK(report.communities[0].size == 2);
    std::ostringstream out;
    write_community_report(out, report);
    CHECK(out.str() == "community,size,C,L,K,F,Ca\n0,2,1,1,0,0,0\n1,1,0,0,1,0,0\n");
  }
}
