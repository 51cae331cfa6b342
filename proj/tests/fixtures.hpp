#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "storygraph/graph.hpp"

#ifndef STORYGRAPH_FIXTURES
#define STORYGRAPH_FIXTURES "tests/fixtures"
#endif

inline std::string fixture_path(const std::string& name) { return std::string(STORYGRAPH_FIXTURES) + "/" + name; }

inline std::string read_fixture(const std::string& name) {
  std::ifstream in(fixture_path(name), std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline storygraph::graph::Adjacency adjacency_from(std::size_t n,
                                                   const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges) {
  return storygraph::graph::Adjacency::from_edges(n, edges);
}

inline storygraph::graph::Adjacency karate() {
  std::istringstream in(read_fixture("karate.edges"));
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::uint32_t a = 0, b = 0;
    ls >> a >> b;
    edges.emplace_back(a, b);
  }
  return storygraph::graph::Adjacency::from_edges(34, edges);
}
