#include "normnet/influence.hpp"

#include <algorithm>
#include <cmath>

#include "normnet/error.hpp"

namespace normnet {

InfluenceVector influence(const Snapshot& s, PageId origin, int steps) {
  if (steps < 0) throw ArgumentError("influence: step count must be >= 0");
  const auto origin_index = s.index_of(origin);
  if (!origin_index) {
    throw ArgumentError("influence: unknown node id " + std::to_string(origin));
  }
  const std::size_t n = s.node_count();
  std::vector<double> cur(n, 0.0), next(n);
  cur[*origin_index] = 1.0;
  for (int step = 0; step < steps; ++step) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t u = 0; u < n; ++u) {
      if (cur[u] == 0.0) continue;
      const auto& sources = s.in_neighbors[u];
      if (sources.empty()) {
        next[u] += cur[u];  // reversed sink: walker stays put
      } else {
        const double share = cur[u] / static_cast<double>(sources.size());
        for (std::int32_t v : sources) next[v] += share;
      }
    }
    cur.swap(next);
  }
  InfluenceVector iv;
  iv.origin = origin;
  iv.steps = steps;
  iv.cutoff = s.cutoff;
  for (std::size_t i = 0; i < n; ++i) {
    if (cur[i] > 0.0) {
      iv.page_ids.push_back(s.nodes[i]);
      iv.probs.push_back(cur[i]);
    }
  }
  return iv;
}

double overlap(const InfluenceVector& p, const InfluenceVector& q) {
  if (p.cutoff != q.cutoff || p.steps != q.steps) {
    throw ArgumentError("overlap: influence vectors from different snapshots or step counts");
  }
  if (p.page_ids.empty() || q.page_ids.empty()) {
    throw ArgumentError("overlap: empty influence vector");
  }
  double dot = 0.0, pp = 0.0, qq = 0.0;
  for (double v : p.probs) pp += v * v;
  for (double v : q.probs) qq += v * v;
  std::size_t i = 0, j = 0;
  while (i < p.page_ids.size() && j < q.page_ids.size()) {
    if (p.page_ids[i] < q.page_ids[j]) {
      ++i;
    } else if (p.page_ids[i] > q.page_ids[j]) {
      ++j;
    } else {
      dot += p.probs[i] * q.probs[j];
      ++i;
      ++j;
    }
  }
  return dot / std::sqrt(pp * qq);
}

double mean_pairwise_overlap(const Snapshot& s, std::span<const PageId> pages, int steps) {
  std::vector<PageId> present;
  for (PageId id : pages) {
    if (s.index_of(id)) present.push_back(id);
  }
  std::sort(present.begin(), present.end());
  present.erase(std::unique(present.begin(), present.end()), present.end());
  if (present.size() < 2) {
    throw NumericError("mean pairwise overlap needs at least 2 pages present in the snapshot");
  }
  std::vector<InfluenceVector> vectors;
  vectors.reserve(present.size());
  for (PageId id : present) vectors.push_back(influence(s, id, steps));
  double sum = 0.0;
  std::size_t n_pairs = 0;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    for (std::size_t j = i + 1; j < vectors.size(); ++j) {
      sum += overlap(vectors[i], vectors[j]);
      ++n_pairs;
    }
  }
  return sum / static_cast<double>(n_pairs);
}

}  // namespace normnet
