#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include "storygraph/graph.hpp"

namespace oracle {

using EdgeList = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Fraction& operator+=(const Fraction& o) {
    num = num * o.den + o.num * den;
    den *= o.den;
    const auto g = std::gcd(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    return *this;
  }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// Random spanning tree plus extra edges.
inline EdgeList random_connected(std::size_t n, std::mt19937_64& rng, double extra_p) {
  EdgeList edges;
  std::vector<std::vector<bool>> has(n, std::vector<bool>(n, false));
  for (std::uint32_t v = 1; v < n; ++v) {
    const auto u = static_cast<std::uint32_t>(rng() % v);
    edges.emplace_back(u, v);
    has[u][v] = has[v][u] = true;
  }
  std::bernoulli_distribution coin(extra_p);
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = a + 1; b < n; ++b)
      if (!has[a][b] && coin(rng)) edges.emplace_back(a, b);
  return edges;
}

// Enumerates every shortest path explicitly (depth-first over simple paths
// of the shortest length) and credits interior vertices.
inline std::vector<Fraction> betweenness(std::size_t n, const EdgeList& edges) {
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (auto [a, b] : edges) adj[a][b] = adj[b][a] = true;
  // all-pairs distances by Floyd-Warshall
  const int inf = 1 << 20;
  std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
  for (std::size_t i = 0; i < n; ++i) {
    d[i][i] = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (adj[i][j]) d[i][j] = 1;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);

  std::vector<Fraction> bc(n);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = s + 1; t < n; ++t) {
      if (d[s][t] >= inf) continue;
      std::vector<std::int64_t> through(n, 0);
      std::int64_t paths = 0;
      std::vector<std::size_t> path{s};
      std::vector<bool> on(n, false);
      on[s] = true;
      auto dfs = [&](auto&& self, std::size_t v) -> void {
        if (v == t) {
          ++paths;
          for (std::size_t i = 1; i + 1 < path.size(); ++i) ++through[path[i]];
          return;
        }
        if (static_cast<int>(path.size()) - 1 >= d[s][t]) return;
        for (std::size_t w = 0; w < n; ++w) {
          if (!adj[v][w] || on[w]) continue;
          on[w] = true;
          path.push_back(w);
          self(self, w);
          path.pop_back();
          on[w] = false;
        }
      };
      dfs(dfs, s);
      for (std::size_t v = 0; v < n; ++v)
        if (through[v]) bc[v] += Fraction{through[v], paths};
    }
  }
  return bc;
}

// Principal eigenvector of the adjacency matrix, non-negative, max = 1.
inline std::vector<double> eigenvector(std::size_t n, const EdgeList& edges) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (auto [a, b] : edges) A(a, b) = A(b, a) = 1.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(A);
  Eigen::VectorXd v = solver.eigenvectors().col(static_cast<Eigen::Index>(n) - 1).cwiseAbs();
  v /= v.maxCoeff();
  return {v.data(), v.data() + v.size()};
}

}  // namespace oracle
