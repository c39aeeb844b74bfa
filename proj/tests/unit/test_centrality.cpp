#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "normnet/centrality.hpp"
#include "normnet/error.hpp"
#include "normnet/rng.hpp"
#include "normnet/stats.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace normnet;
using namespace normnet::testing;

namespace {

double l1_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
  return d;
}

}  // namespace

TEST_CASE("two-node mutual cycle splits centrality evenly") {
  const CentralityVector cv = eigenvector_centrality(snapshot_from_edges(2, {{0, 1}, {1, 0}}));
  CHECK(cv.scores[0] == 0.5);
  CHECK(cv.scores[1] == 0.5);
}

TEST_CASE("complete digraphs and bidirectional cycles are exactly uniform") {
  // "Exactly uniform": every node gets the bitwise-identical score.
  for (const int n : {3, 5, 8}) {
    std::vector<std::pair<int, int>> complete;
    for (int u = 0; u < n; ++u) {
      for (int v = 0; v < n; ++v) {
        if (u != v) complete.emplace_back(u, v);
      }
    }
    const CentralityVector cv = eigenvector_centrality(snapshot_from_edges(n, complete));
    for (double s : cv.scores) {
      CHECK(s == cv.scores[0]);
      CHECK(s == doctest::Approx(1.0 / n).epsilon(1e-14));
    }
  }
  std::vector<std::pair<int, int>> ring;
  for (int u = 0; u < 6; ++u) {
    ring.emplace_back(u, (u + 1) % 6);
    ring.emplace_back((u + 1) % 6, u);
  }
  const CentralityVector cv = eigenvector_centrality(snapshot_from_edges(6, ring));
  for (double s : cv.scores) {
    CHECK(s == cv.scores[0]);
    CHECK(s == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  }
}

TEST_CASE("chain matches the dense fixed-point oracle to 1e-10") {
  const Snapshot s = snapshot_from_edges(3, {{0, 1}, {1, 2}});
  const CentralityVector cv = eigenvector_centrality(s);
  const std::vector<double> oracle = dense_centrality_solve(s, 0.15);
  CHECK(l1_distance(cv.scores, oracle) < 1e-10);
  // The sink accumulates the most mass.
  CHECK(cv.scores[2] > cv.scores[1]);
  CHECK(cv.scores[1] > cv.scores[0]);
}

TEST_CASE("random graphs up to 50 nodes match the dense solve within 1e-8") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(uniform_index(rng, 49));
    const Snapshot s = random_digraph(rng, n, 2.5 / n);
    const CentralityVector cv = eigenvector_centrality(s);
    CHECK(l1_distance(cv.scores, dense_centrality_solve(s, 0.15)) < 1e-8);
    const double total = std::accumulate(cv.scores.begin(), cv.scores.end(), 0.0);
    CHECK(std::abs(total - 1.0) < 1e-9);
    CHECK(*std::min_element(cv.scores.begin(), cv.scores.end()) > 0.0);
  }
}

TEST_CASE("centrality is equivariant under node relabeling") {
  std::mt19937_64 rng(43);
  const int n = 12;
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (u != v && uniform_unit(rng) < 0.2) edges.emplace_back(u, v);
    }
  }
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  shuffle_in_place(perm, rng);
  std::vector<std::pair<int, int>> relabeled;
  for (const auto& [u, v] : edges) relabeled.emplace_back(perm[u], perm[v]);

  const CentralityVector a = eigenvector_centrality(snapshot_from_edges(n, edges));
  const CentralityVector b = eigenvector_centrality(snapshot_from_edges(n, relabeled));
  for (int u = 0; u < n; ++u) {
    CHECK(a.scores[u] == doctest::Approx(b.scores[perm[u]]).epsilon(1e-12));
  }
}

TEST_CASE("centrality option validation and convergence failure") {
  const Snapshot s = snapshot_from_edges(3, {{0, 1}, {1, 2}});
  CHECK_THROWS_AS(eigenvector_centrality(snapshot_from_edges(0, {})), ArgumentError);
  CHECK_THROWS_AS(eigenvector_centrality(s, {1.5, 1e-12, 100}), ArgumentError);
  try {
    eigenvector_centrality(s, {0.15, 1e-12, 1});
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.residual > 0.0);
  }
}

TEST_CASE("gini hand values are exact") {
  CHECK(gini(std::vector<double>{3, 3, 3, 3}) == 0.0);
  CHECK(gini(std::vector<double>{0, 0, 0, 1}) == 0.75);
  // One-hot of length n approaches 1 as 1 - 1/n.
  for (const int n : {10, 100, 1000}) {
    std::vector<double> one_hot(n, 0.0);
    one_hot[0] = 5.0;
    CHECK(gini(one_hot) == doctest::Approx(1.0 - 1.0 / n).epsilon(1e-12));
  }
}

TEST_CASE("gini matches the pairwise oracle and is scale invariant") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(uniform_index(rng, 40));
    std::vector<double> values(n);
    for (double& v : values) v = uniform_unit(rng) * 10.0;
    const double g = gini(values);
    CHECK(g == doctest::Approx(pairwise_gini(values)).epsilon(1e-10));
    std::vector<double> scaled = values;
    for (double& v : scaled) v *= 123.456;
    CHECK(std::abs(gini(scaled) - g) < 1e-12);
    // Adding a constant strictly reduces inequality for non-degenerate input.
    std::vector<double> shifted = values;
    for (double& v : shifted) v += 5.0;
    if (g > 1e-9) CHECK(gini(shifted) < g);
  }
}

TEST_CASE("gini input validation") {
  CHECK_THROWS_AS(gini(std::vector<double>{1.0}), ArgumentError);
  CHECK_THROWS_AS(gini(std::vector<double>{0.0, 0.0}), NumericError);
  CHECK_THROWS_AS(gini(std::vector<double>{-1.0, 2.0}), ArgumentError);
}

TEST_CASE("detect_breaks finds the large gap") {
  CentralityVector cv;
  cv.page_ids = {0, 1, 2, 3, 4};
  const double total = 10.0 + 9.0 + 1.0 + 0.9 + 0.8;
  cv.scores = {10.0 / total, 9.0 / total, 1.0 / total, 0.9 / total, 0.8 / total};
  const auto breaks = detect_breaks(cv, 5, 1);
  REQUIRE(breaks.size() == 1);
  CHECK(breaks[0].rank == 2);  // gap between the 2nd and 3rd ranked pages
  CHECK(breaks[0].size == doctest::Approx(8.0 / total).epsilon(1e-12));
}

TEST_CASE("detect_breaks on uniform scores falls back to rank order under separation") {
  CentralityVector cv;
  for (int i = 0; i < 20; ++i) {
    cv.page_ids.push_back(i);
    cv.scores.push_back(1.0 / 20.0);
  }
  const auto breaks = detect_breaks(cv, 5, 3);
  REQUIRE(breaks.size() == 3);
  CHECK(breaks[0].rank == 1);
  CHECK(breaks[1].rank == 7);
  CHECK(breaks[2].rank == 13);
  for (const BreakPoint& b : breaks) CHECK(b.size == 0.0);
}

TEST_CASE("detect_breaks argument validation") {
  CentralityVector cv;
  cv.page_ids = {0, 1};
  cv.scores = {0.6, 0.4};
  CHECK_THROWS_AS(detect_breaks(cv, 5, 0), ArgumentError);
  cv.page_ids = {0};
  cv.scores = {1.0};
  CHECK_THROWS_AS(detect_breaks(cv, 5, 1), ArgumentError);
}

TEST_CASE("centrality persistence: identical vectors correlate perfectly") {
  const Snapshot s = snapshot_from_edges(6, {{0, 1}, {1, 2}, {2, 0}, {3, 0}, {4, 2}, {5, 1}});
  const CentralityVector cv = eigenvector_centrality(s);
  CHECK(centrality_persistence(cv, cv) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("centrality persistence uses only shared pages") {
  CentralityVector a, b;
  a.page_ids = {0, 1, 2, 3};
  a.scores = {0.1, 0.2, 0.3, 0.4};
  b.page_ids = {1, 2, 3, 9};
  b.scores = {0.21, 0.32, 0.41, 0.06};
  const double r = centrality_persistence(a, b);
  CHECK(r == doctest::Approx(pearson(std::vector<double>{0.2, 0.3, 0.4},
                                     std::vector<double>{0.21, 0.32, 0.41}))
                 .epsilon(1e-12));
  // Too few shared nodes -> undefined.
  b.page_ids = {2, 3, 9, 10};
  CHECK_THROWS_AS(centrality_persistence(a, b), ArgumentError);
}
