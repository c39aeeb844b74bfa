#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "normnet/corpus.hpp"
#include "normnet/time.hpp"

namespace normnet {

// The induced directed graph at a cutoff instant: pages created at or
// before the cutoff, links first seen at or before it with both endpoints
// present. Immutable once built.
struct Snapshot {
  Timestamp cutoff = 0;
  std::vector<PageId> nodes;                      // ascending
  std::vector<std::pair<PageId, PageId>> edges;   // ascending (src, dst)

  // Adjacency over dense node indexes (positions in `nodes`), sorted.
  std::vector<std::vector<std::int32_t>> out_neighbors;
  std::vector<std::vector<std::int32_t>> in_neighbors;

  std::size_t node_count() const { return nodes.size(); }
  std::size_t edge_count() const { return edges.size(); }

  // Dense index of a page id, or nullopt when absent from this snapshot.
  std::optional<std::int32_t> index_of(PageId id) const;
};

Snapshot build_snapshot(const Corpus& corpus, Timestamp cutoff);

// |E| / (|V| * (|V|-1)) for the directed graph. Needs at least 2 nodes.
double density(const Snapshot& s);

// Largest weakly connected component; ties broken by smallest member id.
// Empty snapshot yields an empty set.
std::vector<PageId> giant_component(const Snapshot& s);

// Subgraph induced by `keep` (ids not in the snapshot are ignored).
Snapshot induced_subgraph(const Snapshot& s, std::span<const PageId> keep);

struct GrowthRate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n_node_years = 0;
};

// Mean and standard error of per-node-year multiplicative in-degree growth
// (deg_{t+1}+1)/(deg_t+1) - 1, over nodes present in consecutive snapshots
// with deg_t < degree_cap. Throws NumericError when no node-year qualifies.
GrowthRate in_degree_growth_rates(const std::vector<Snapshot>& snapshots, int degree_cap);

}  // namespace normnet
