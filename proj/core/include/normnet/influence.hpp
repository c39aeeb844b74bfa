#pragma once

#include <span>
#include <vector>

#include "normnet/snapshot.hpp"

namespace normnet {

// Exact distribution of an n-step random walk on the direction-reversed
// graph, started at `origin`. Sparse: only reached pages are listed.
struct InfluenceVector {
  PageId origin = -1;
  int steps = 0;
  Timestamp cutoff = 0;
  std::vector<PageId> page_ids;  // ascending support
  std::vector<double> probs;     // parallel, sums to 1
};

// Each step moves to a uniformly random in-neighbor of the current node;
// nodes without in-neighbors hold the walker in place. Computed by n sparse
// transition applications, not sampling.
InfluenceVector influence(const Snapshot& s, PageId origin, int steps = 5);

// Cosine similarity of two influence vectors (range [0,1], symmetric).
// Both must come from the same snapshot with the same step count.
double overlap(const InfluenceVector& p, const InfluenceVector& q);

// Unweighted mean of overlap over all unordered pairs of the given pages
// that exist in the snapshot; pages not yet created are excluded. Throws
// NumericError when fewer than 2 exist.
double mean_pairwise_overlap(const Snapshot& s, std::span<const PageId> pages, int steps = 5);

}  // namespace normnet
