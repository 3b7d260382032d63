#pragma once

// Independent reference for small graphs: enumerate every bond configuration
// and label clusters by breadth-first search over an explicit edge list. Shares
// no code with the library's partition-aggregating enumerator.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <queue>
#include <utility>
#include <vector>

#include "percolab/graph.hpp"

namespace percolab::testing {

struct BruteForce {
  std::uint64_t V = 0;
  double chi = 0.0;
  std::vector<double> law;        // P(|C(0)| = k), k = 0..V
  double E_cmax = 0.0;
  std::vector<double> tau;        // V x V
  std::vector<double> var_z;      // Var Z_{>=s}, s = 0..V
  double E_root_sq = 0.0;         // E|C(0)|^2

  // Green-vertex quantities for one gamma, averaged over roots.
  static double magnetization_from_law(const std::vector<double>& law, double gamma) {
    double m = 0.0;
    for (std::size_t k = 1; k < law.size(); ++k) m += law[k] * (1.0 - std::pow(1.0 - gamma, double(k)));
    return m;
  }
};

inline std::vector<std::pair<Vertex, Vertex>> explicit_edges(const Graph& g) {
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (Vertex u = 0; u < g.V(); ++u)
    for (Vertex v : g.neighbors(u))
      if (u < v) edges.emplace_back(u, v);
  return edges;
}

// Cluster label of every vertex for bond mask `mask` over `edges`.
inline std::vector<int> bfs_labels(std::uint64_t V, const std::vector<std::pair<Vertex, Vertex>>& edges,
                                   std::uint64_t mask) {
  std::vector<std::vector<Vertex>> adj(V);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if ((mask >> e) & 1u) {
      adj[edges[e].first].push_back(edges[e].second);
      adj[edges[e].second].push_back(edges[e].first);
    }
  }
  std::vector<int> label(V, -1);
  int next = 0;
  for (Vertex s = 0; s < V; ++s) {
    if (label[s] >= 0) continue;
    std::queue<Vertex> q;
    q.push(s);
    label[s] = next;
    while (!q.empty()) {
      const Vertex u = q.front();
      q.pop();
      for (Vertex w : adj[u])
        if (label[w] < 0) {
          label[w] = next;
          q.push(w);
        }
    }
    ++next;
  }
  return label;
}

inline BruteForce brute_force(const Graph& g, double p) {
  const auto edges = explicit_edges(g);
  const std::uint64_t V = g.V();
  BruteForce r;
  r.V = V;
  r.law.assign(V + 1, 0.0);
  r.tau.assign(V * V, 0.0);
  std::vector<double> ez(V + 2, 0.0), ez2(V + 2, 0.0);
  const std::uint64_t n_configs = std::uint64_t{1} << edges.size();
  for (std::uint64_t mask = 0; mask < n_configs; ++mask) {
    const int occupied = std::popcount(mask);
    const double w = std::pow(p, occupied) * std::pow(1.0 - p, double(edges.size()) - occupied);
    const auto label = bfs_labels(V, edges, mask);
    std::vector<std::uint64_t> size(V, 0);
    for (Vertex v = 0; v < V; ++v) ++size[label[v]];
    r.law[size[label[0]]] += w;
    r.E_root_sq += w * double(size[label[0]] * size[label[0]]);
    r.E_cmax += w * double(*std::max_element(size.begin(), size.end()));
    for (Vertex x = 0; x < V; ++x)
      for (Vertex y = 0; y < V; ++y)
        if (label[x] == label[y]) r.tau[x * V + y] += w;
    for (std::uint64_t s = 0; s <= V; ++s) {
      double z = 0.0;
      for (Vertex v = 0; v < V; ++v) z += size[label[v]] >= s ? 1.0 : 0.0;
      ez[s] += w * z;
      ez2[s] += w * z * z;
    }
  }
  for (std::uint64_t k = 1; k <= V; ++k) r.chi += double(k) * r.law[k];
  r.var_z.resize(V + 1);
  for (std::uint64_t s = 0; s <= V; ++s) r.var_z[s] = ez2[s] - ez[s] * ez[s];
  return r;
}

}  // namespace percolab::testing
