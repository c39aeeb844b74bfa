#pragma once

// Self-contained generators for the benchmark binaries.

#include <random>
#include <set>
#include <utility>
#include <vector>

#include "normnet/rng.hpp"
#include "normnet/snapshot.hpp"

namespace normnet::bench {

// Preferential-attachment digraph over nodes 0..n-1.
inline Snapshot pa_graph(int n, int links_per_node, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<int> in_degree(n, 0);
  std::set<std::pair<int, int>> edges;
  for (int i = 1; i < n; ++i) {
    for (int l = 0; l < std::min(links_per_node, i); ++l) {
      std::int64_t total = 0;
      for (int j = 0; j < i; ++j) total += in_degree[j] + 1;
      std::int64_t pick = static_cast<std::int64_t>(uniform_unit(rng) * total);
      int target = 0;
      for (int j = 0; j < i; ++j) {
        pick -= in_degree[j] + 1;
        if (pick < 0) {
          target = j;
          break;
        }
      }
      if (edges.emplace(i, target).second) ++in_degree[target];
    }
  }
  Snapshot s;
  s.cutoff = 0;
  for (int i = 0; i < n; ++i) s.nodes.push_back(i);
  s.out_neighbors.resize(n);
  s.in_neighbors.resize(n);
  for (const auto& [u, v] : edges) {
    s.edges.emplace_back(u, v);
    s.out_neighbors[u].push_back(v);
    s.in_neighbors[v].push_back(u);
  }
  return s;
}

}  // namespace normnet::bench
