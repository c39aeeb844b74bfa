#include "normnet/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "normnet/error.hpp"
#include "normnet/stats.hpp"

namespace normnet {

std::optional<double> CentralityVector::score_of(PageId id) const {
  auto it = std::lower_bound(page_ids.begin(), page_ids.end(), id);
  if (it == page_ids.end() || *it != id) return std::nullopt;
  return scores[static_cast<std::size_t>(it - page_ids.begin())];
}

CentralityVector eigenvector_centrality(const Snapshot& s, const CentralityOptions& opt) {
  const std::size_t n = s.node_count();
  if (n == 0) throw ArgumentError("eigenvector centrality needs a nonempty snapshot");
  if (!(opt.epsilon > 0.0 && opt.epsilon < 1.0)) {
    throw ArgumentError("epsilon must lie strictly between 0 and 1");
  }

  std::vector<double> cur(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n);
  const double jump = opt.epsilon / static_cast<double>(n);

  double residual = 0.0;
  for (int iter = 0; iter < opt.max_iter; ++iter) {
    double dangling = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
      if (s.out_neighbors[u].empty()) dangling += cur[u];
    }
    const double base = jump + (1.0 - opt.epsilon) * dangling / static_cast<double>(n);
    std::fill(next.begin(), next.end(), base);
    for (std::size_t i = 0; i < n; ++i) {
      double inflow = 0.0;
      for (std::int32_t u : s.in_neighbors[i]) {
        inflow += cur[u] / static_cast<double>(s.out_neighbors[u].size());
      }
      next[i] += (1.0 - opt.epsilon) * inflow;
    }
    const double sum = std::accumulate(next.begin(), next.end(), 0.0);
    for (double& v : next) v /= sum;
    residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) residual += std::abs(next[i] - cur[i]);
    cur.swap(next);
    if (residual < opt.tol) {
      CentralityVector cv;
      cv.cutoff = s.cutoff;
      cv.page_ids = s.nodes;
      cv.scores = std::move(cur);
      return cv;
    }
  }
  throw ConvergenceError("eigenvector centrality did not converge within " +
                             std::to_string(opt.max_iter) + " iterations (residual " +
                             std::to_string(residual) + ")",
                         residual);
}

double gini(std::span<const double> values) {
  if (values.size() < 2) throw ArgumentError("gini needs at least 2 values");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() < 0.0) throw ArgumentError("gini is defined for nonnegative values");
  const double total = std::accumulate(sorted.begin(), sorted.end(), 0.0);
  if (total <= 0.0) throw NumericError("gini undefined for all-zero input");
  const double n = static_cast<double>(sorted.size());
  // sum_{i,j}|x_i-x_j| = 2 * sum_i (2i-n-1) x_(i) over the ascending order.
  double weighted = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    weighted += (2.0 * static_cast<double>(i + 1) - n - 1.0) * sorted[i];
  }
  return weighted / (n * total);
}

std::vector<BreakPoint> detect_breaks(const CentralityVector& cv, int min_separation,
                                      int top_m) {
  if (top_m < 1) throw ArgumentError("detect_breaks: top_m must be >= 1");
  const std::size_t n = cv.scores.size();
  if (n < 2) throw ArgumentError("detect_breaks needs at least 2 pages");

  // Descending score, ties by smaller page id.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (cv.scores[a] != cv.scores[b]) return cv.scores[a] > cv.scores[b];
    return cv.page_ids[a] < cv.page_ids[b];
  });

  std::vector<BreakPoint> candidates;
  candidates.reserve(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    candidates.push_back({static_cast<std::int32_t>(i + 1),
                          cv.scores[order[i]] - cv.scores[order[i + 1]]});
  }
  std::sort(candidates.begin(), candidates.end(), [](const BreakPoint& a, const BreakPoint& b) {
    if (a.size != b.size) return a.size > b.size;
    return a.rank < b.rank;
  });

  std::vector<BreakPoint> accepted;
  for (const BreakPoint& c : candidates) {
    if (static_cast<int>(accepted.size()) == top_m) break;
    const bool clear = std::all_of(accepted.begin(), accepted.end(), [&](const BreakPoint& a) {
      return std::abs(a.rank - c.rank) > min_separation;
    });
    if (clear) accepted.push_back(c);
  }
  return accepted;
}

double centrality_persistence(const CentralityVector& a, const CentralityVector& b) {
  std::vector<double> x, y;
  std::size_t i = 0, j = 0;
  while (i < a.page_ids.size() && j < b.page_ids.size()) {
    if (a.page_ids[i] < b.page_ids[j]) {
      ++i;
    } else if (a.page_ids[i] > b.page_ids[j]) {
      ++j;
    } else {
      x.push_back(a.scores[i]);
      y.push_back(b.scores[j]);
      ++i;
      ++j;
    }
  }
  return pearson(x, y);
}

}  // namespace normnet
