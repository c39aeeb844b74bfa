#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "normnet/snapshot.hpp"

namespace normnet {

// Stationary distribution of the epsilon-jump random walk on a snapshot.
// Scores are parallel to `page_ids` (ascending), sum to 1 and are all
// positive.
struct CentralityVector {
  Timestamp cutoff = 0;
  std::vector<PageId> page_ids;
  std::vector<double> scores;

  std::optional<double> score_of(PageId id) const;
};

struct CentralityOptions {
  double epsilon = 0.15;  // random-jump probability
  double tol = 1e-12;     // L1 stopping threshold
  int max_iter = 10000;
};

// Power iteration of the walk: with probability 1-epsilon follow a uniform
// out-link (dangling mass spreads uniformly), with probability epsilon jump
// to a uniform node. Throws ConvergenceError past max_iter.
CentralityVector eigenvector_centrality(const Snapshot& s, const CentralityOptions& opt = {});

// Population Gini coefficient sum_{i,j}|x_i-x_j| / (2 n^2 mu) of a
// nonnegative list; range [0, 1-1/n]. All-zero input is undefined.
double gini(std::span<const double> values);

struct BreakPoint {
  std::int32_t rank = 0;  // 1-based position in the descending score order
  double size = 0.0;      // E_rank - E_{rank+1}
};

// Largest gaps in the rank-ordered centrality sequence, greedily accepted
// so accepted ranks differ by more than min_separation; equal sizes prefer
// the smaller rank.
std::vector<BreakPoint> detect_breaks(const CentralityVector& cv, int min_separation = 5,
                                      int top_m = 5);

// Pearson correlation of the two score vectors over their shared pages.
double centrality_persistence(const CentralityVector& a, const CentralityVector& b);

}  // namespace normnet
