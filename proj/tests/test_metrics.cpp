#include <doctest.h>
#include <omp.h>

#include <cmath>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "storygraph/error.hpp"
#include "storygraph/metrics.hpp"

using namespace storygraph;
using namespace storygraph::metrics;
using graph::Adjacency;

namespace {

Adjacency path(std::uint32_t n) {
  oracle::EdgeList e;
  for (std::uint32_t i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Adjacency::from_edges(n, e);
}

Adjacency complete(std::uint32_t n) {
  oracle::EdgeList e;
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = a + 1; b < n; ++b) e.emplace_back(a, b);
  return Adjacency::from_edges(n, e);
}

Adjacency star(std::uint32_t leaves) {
  oracle::EdgeList e;
  for (std::uint32_t i = 1; i <= leaves; ++i) e.emplace_back(0, i);
  return Adjacency::from_edges(leaves + 1, e);
}

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("betweenness examples") {
    auto p3 = betweenness(path(3));
    CHECK(p3 == std::vector<double>{0.0, 1.0, 0.0});
    CHECK(betweenness(star(4))[0] == 6.0);
    for (double v : betweenness(complete(4))) CHECK(v == 0.0);
    CHECK(serial::betweenness(star(4))[0] == 6.0);
  }

  TEST_CASE("betweenness matches path enumeration") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 60; ++trial) {
      const std::size_t n = 2 + rng() % 7;
      auto edges = oracle::random_connected(n, rng, 0.3);
      auto adj = Adjacency::from_edges(n, edges);
      auto expect = oracle::betweenness(n, edges);
      auto got = betweenness(adj), ref = serial::betweenness(adj);
      for (std::size_t v = 0; v < n; ++v) {
        CHECK(std::abs(got[v] - expect[v].value()) <= 1e-12);
        CHECK(std::abs(ref[v] - expect[v].value()) <= 1e-12);
      }
    }
  }

  TEST_CASE("eigenvector examples") {
    for (double v : eigenvector_centrality(complete(5))) CHECK(v == doctest::Approx(1.0));
    auto p3 = eigenvector_centrality(path(3));
    CHECK(p3[1] == doctest::Approx(1.0));
    CHECK(p3[0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-7));
    auto iso = eigenvector_centrality(Adjacency::from_edges(4, {{0, 1}, {1, 2}}));
    CHECK(iso[3] == 0.0);
    CHECK_THROWS_AS(eigenvector_centrality(Adjacency::from_edges(0, {})), ValidationError);
  }

  TEST_CASE("eigenvector matches dense decomposition") {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 60; ++trial) {
      const std::size_t n = 2 + rng() % 7;
      auto edges = oracle::random_connected(n, rng, 0.4);
      auto adj = Adjacency::from_edges(n, edges);
      auto expect = oracle::eigenvector(n, edges);
      auto got = eigenvector_centrality(adj), ref = serial::eigenvector_centrality(adj);
      for (std::size_t v = 0; v < n; ++v) {
        CHECK(std::abs(got[v] - expect[v]) <= 1e-6);
        CHECK(std::abs(ref[v] - expect[v]) <= 1e-6);
      }
    }
  }

  TEST_CASE("non-convergence reports the residual") {
    EigenOptions tight;
    tight.tol = 1e-300;
    tight.max_iter = 3;
    try {
      eigenvector_centrality(path(6), tight);
      FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
      CHECK(e.residual() > 0.0);
    }
  }

  TEST_CASE("topology examples") {
    auto k3 = topology(complete(3));
    CHECK(k3.density == 1.0);
    CHECK(k3.diameter == 1);
    CHECK(k3.avg_clustering == 1.0);
    CHECK(k3.connected_components == 1);

    auto p4 = topology(path(4));
    CHECK(p4.diameter == 3);
    CHECK(std::abs(p4.avg_shortest_path - 10.0 / 6.0) <= 1e-9);
    CHECK(p4.avg_clustering == 0.0);

    auto two = topology(Adjacency::from_edges(4, {{0, 1}, {2, 3}}));
    CHECK(two.connected_components == 2);
    CHECK(two.diameter == 1);
    CHECK(two.lcc_size == 2);

    auto empty = topology(Adjacency::from_edges(0, {}));
    CHECK(empty.connected_components == 0);
    CHECK(empty.density == 0.0);

    auto regular = topology(complete(4));
    CHECK_FALSE(regular.assortativity_defined);
    CHECK(regular.degree_assortativity == 0.0);
    auto st = topology(star(4));
    CHECK(st.assortativity_defined);
    CHECK(st.degree_assortativity == doctest::Approx(-1.0));
  }

  TEST_CASE("topology invariants and serial agreement") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t n = 2 + rng() % 40;
      auto adj = Adjacency::from_edges(n, oracle::random_connected(n, rng, 0.1));
      auto a = topology(adj), b = serial::topology(adj);
      CHECK(a.density >= 0.0);
      CHECK(a.density <= 1.0);
      CHECK(static_cast<double>(a.diameter) >= a.avg_shortest_path);
      CHECK(a.avg_shortest_path >= 1.0);
      CHECK(a.diameter == b.diameter);
      CHECK(a.avg_shortest_path == b.avg_shortest_path);
      CHECK(a.avg_clustering == doctest::Approx(b.avg_clustering));
      std::size_t sum = 0;
      for (auto d : degree(adj)) sum += d;
      CHECK(sum == 2 * a.edge_count);
    }
  }

  TEST_CASE("parallel kernels agree with the reference on larger graphs") {
    std::mt19937_64 rng(4);
    auto adj = Adjacency::from_edges(300, oracle::random_connected(300, rng, 0.02));
    auto a = betweenness(adj), b = serial::betweenness(adj);
    for (std::size_t v = 0; v < a.size(); ++v) CHECK(a[v] == doctest::Approx(b[v]).epsilon(1e-12));
    auto x = eigenvector_centrality(adj), y = serial::eigenvector_centrality(adj);
    for (std::size_t v = 0; v < x.size(); ++v) CHECK(x[v] == y[v]);
    CHECK(betweenness(adj) == a);
  }

  TEST_CASE("results do not depend on the thread count") {
    std::mt19937_64 rng(6);
    auto adj = Adjacency::from_edges(400, oracle::random_connected(400, rng, 0.015));
    const int before = omp_get_max_threads();
    omp_set_num_threads(1);
    auto b1 = betweenness(adj);
    auto e1 = eigenvector_centrality(adj);
    auto t1 = topology(adj);
    omp_set_num_threads(5);
    auto b5 = betweenness(adj);
    auto e5 = eigenvector_centrality(adj);
    auto t5 = topology(adj);
    omp_set_num_threads(before);
    CHECK(b1 == b5);
    CHECK(e1 == e5);
    CHECK(t1.avg_shortest_path == t5.avg_shortest_path);
    CHECK(t1.avg_clustering == t5.avg_clustering);
    CHECK(t1.diameter == t5.diameter);
  }

  TEST_CASE("fractional ranks") {
    CHECK(fractional_ranks({3.0, 1.0, 2.0}) == std::vector<double>{1.0, 3.0, 2.0});
    CHECK(fractional_ranks({5.0, 5.0, 1.0}) == std::vector<double>{1.5, 1.5, 3.0});
    CHECK(fractional_ranks({1.0, 1.0 + 1e-12, 0.0}) == std::vector<double>{1.5, 1.5, 3.0});
    CHECK(fractional_ranks({}).empty());
  }

  TEST_CASE("influence scores") {
    graph::MultilayerGraph k3;
    for (const char* id : {"A", "B", "C"}) k3.add_node(graph::LayerKind::Character, id);
    k3.add_edge(0, 1);
    k3.add_edge(1, 2);
    k3.add_edge(0, 2);
    for (const auto& r : influence_scores(k3)) CHECK(r.influence == doctest::Approx(2.0));

    graph::MultilayerGraph st;
    st.add_node(graph::LayerKind::Character, "HUB");
    for (int i = 0; i < 4; ++i) st.add_edge(0, st.add_node(graph::LayerKind::Character, "L" + std::to_string(i)));
    auto r = influence_scores(st);
    CHECK(r.front().node.id == "HUB");
    CHECK(r.front().influence == 1.0);
    for (std::size_t i = 1; i < r.size(); ++i) CHECK(r[i - 1].influence <= r[i].influence);
  }

  TEST_CASE("rank invariance and dominance") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> val(0.0, 100.0);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<NodeMetrics> nodes;
      for (int i = 0; i < 12; ++i)
        nodes.push_back({"n" + std::to_string(i), "C", std::floor(val(rng) / 10), val(rng), val(rng) / 100});
      auto base = rank_influence(nodes);
      auto scaled = nodes;
      for (auto& n : scaled) n.betweenness *= 7.5;
      auto after = rank_influence(scaled);
      for (std::size_t i = 0; i < base.size(); ++i) {
        CHECK(base[i].node.id == after[i].node.id);
        CHECK(base[i].influence == after[i].influence);
        CHECK(base[i].influence >= 1.0);
        CHECK(base[i].influence <= 12.0);
      }
      for (const auto& u : base)
        for (const auto& v : base)
          if (u.node.degree >= v.node.degree && u.node.betweenness >= v.node.betweenness &&
              u.node.eigenvector >= v.node.eigenvector)
            CHECK(u.influence <= v.influence);
    }
  }

  TEST_CASE("csv report") {
    std::vector<NodeMetrics> nodes = {{"QUI-GON", "C", 188, 365.29, 1.0}, {"ANAKIN", "C", 151, 256.84, 0.77}};
    std::ostringstream out;
    write_influence_csv(out, rank_influence(nodes), 1);
    CHECK(out.str() ==
          "node,layer,degree,betweenness,eigen,rank_deg,rank_btw,rank_eig,influence\n"
          "QUI-GON,C,188,365.290000,1.000000,1.0,1.0,1.0,1.0000\n");
  }
}
