#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "normnet/centrality.hpp"
#include "normnet/corpus.hpp"
#include "normnet/semantics.hpp"
#include "normnet/snapshot.hpp"

namespace normnet {

// Louvain communities of a snapshot's undirected projection. Cluster ids
// are renumbered 0..n-1 by size descending (ties by smallest member id).
struct Partition {
  Timestamp cutoff = 0;
  std::vector<PageId> page_ids;        // ascending, equals snapshot nodes
  std::vector<std::int32_t> clusters;  // parallel cluster ids
  double modularity = 0.0;
  std::int32_t n_clusters = 0;
};

// Two-phase Louvain (local moving + aggregation to a fixed point) on the
// undirected projection: reciprocal edges collapse to one, unweighted.
// Node visit orders are shuffled by the seed; the best of a fixed number of
// seed-derived restarts is returned, so results are reproducible per seed.
Partition louvain(const Snapshot& s, std::uint64_t seed = 0);

// Newman modularity of an assignment on the undirected projection.
// `assignment` is parallel to s.nodes; a negative entry means unassigned
// and raises ArgumentError.
double modularity(const Snapshot& s, std::span<const std::int32_t> assignment);

struct LocalClustering {
  std::vector<double> per_node;  // parallel to snapshot nodes, in [0,1]
  double average = 0.0;          // sum / |nodes|
  double sum = 0.0;              // unnormalized sum over nodes
};

// Directed local clustering: for each node, the fraction of ordered pairs
// of its neighbors (in- union out-) that are themselves linked. Nodes with
// fewer than 2 neighbors contribute 0.
LocalClustering local_clustering(const Snapshot& s);

struct ClusterSummary {
  std::int32_t cluster = 0;
  std::size_t size = 0;
  double size_fraction = 0.0;
  std::vector<PageId> top_pages;  // by centrality, descending
  int dominant_topic = -1;
  std::optional<NormClass> norm_class;  // plurality label of classified members
};

// Per-cluster digest ordered by size descending: top pages by centrality,
// dominant topic of the mean member mixture, plurality norm class.
std::vector<ClusterSummary> summarize_clusters(const Partition& partition,
                                               const CentralityVector& cv, const TopicModel& tm,
                                               const Corpus& corpus, int top_k = 10);

}  // namespace normnet
