#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <vector>

#include "kcenter/common.hpp"
#include "kcenter/metric.hpp"
#include "kcenter/rng.hpp"

namespace kcenter {

// Undirected graph over point ids, adjacency lists kept sorted ascending.
struct Graph {
  std::size_t n = 0;
  std::vector<std::vector<std::size_t>> adj;

  explicit Graph(std::size_t n_ = 0) : n(n_), adj(n_) {}

  bool has_edge(std::size_t a, std::size_t b) const {
    const auto& row = adj[a];
    return std::binary_search(row.begin(), row.end(), b);
  }
};

// Edge iff d(i, j) <= threshold, i != j. Ties (equality) are edges.
inline Graph build_disk_graph(DistanceMeter& dist, double threshold) {
  std::size_t n = dist.space().size();
  Graph g(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (dist(i, j) <= threshold) {
        g.adj[i].push_back(j);
        g.adj[j].push_back(i);
      }
  return g;
}

// G^2: edge iff distinct vertices joined by a path of at most two edges.
inline Graph square(const Graph& g) {
  Graph s(g.n);
  std::vector<char> mark(g.n, 0);
  for (std::size_t i = 0; i < g.n; ++i) {
    std::vector<std::size_t> hits;
    for (std::size_t j : g.adj[i]) {
      if (!mark[j] && j != i) { mark[j] = 1; hits.push_back(j); }
      for (std::size_t k : g.adj[j])
        if (!mark[k] && k != i) { mark[k] = 1; hits.push_back(k); }
    }
    std::sort(hits.begin(), hits.end());
    s.adj[i] = std::move(hits);
    for (std::size_t j : s.adj[i]) mark[j] = 0;
  }
  return s;
}

// Order in which greedy procedures visit vertices. Records how it was made so
// traces can reproduce it.
struct VisitOrder {
  std::vector<std::size_t> perm;
  bool randomized = false;
  std::uint64_t seed = 0;  // meaningful only when randomized

  static VisitOrder by_index(std::size_t n) {
    VisitOrder v;
    v.perm.resize(n);
    std::iota(v.perm.begin(), v.perm.end(), std::size_t{0});
    return v;
  }

  static VisitOrder shuffled(std::size_t n, std::uint64_t seed) {
    VisitOrder v = by_index(n);
    v.randomized = true;
    v.seed = seed;
    Rng rng = Rng::stream(seed, "order");
    rng.shuffle(v.perm);
    return v;
  }
};

// Greedy maximal independent set: visit vertices in order, keep a vertex iff
// no earlier-kept vertex is adjacent to it. Result sorted ascending by id.
inline std::vector<std::size_t> greedy_mis(const Graph& g, const VisitOrder& order) {
  if (order.perm.size() != g.n) throw GuardError("visit order does not match graph");
  std::vector<char> blocked(g.n, 0);
  std::vector<std::size_t> kept;
  for (std::size_t v : order.perm) {
    if (blocked[v]) continue;
    kept.push_back(v);
    blocked[v] = 1;
    for (std::size_t u : g.adj[v]) blocked[u] = 1;
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

// Component label per vertex; labels are 0-based, assigned in order of the
// lowest vertex id contained in each component.
inline std::vector<std::size_t> connected_components(const Graph& g) {
  std::vector<std::size_t> label(g.n, SIZE_MAX);
  std::size_t next = 0;
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < g.n; ++s) {
    if (label[s] != SIZE_MAX) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t u : g.adj[v])
        if (label[u] == SIZE_MAX) {
          label[u] = next;
          stack.push_back(u);
        }
    }
    ++next;
  }
  return label;
}

}  // namespace kcenter
