#include <doctest.h>

#include <cmath>

#include "normnet/error.hpp"
#include "normnet/influence.hpp"
#include "normnet/rng.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace normnet;
using namespace normnet::testing;

TEST_CASE("zero steps is a point mass on the origin") {
  const Snapshot s = snapshot_from_edges(4, {{0, 1}, {2, 1}, {3, 2}});
  const InfluenceVector iv = influence(s, 1, 0);
  REQUIRE(iv.page_ids == std::vector<PageId>{1});
  CHECK(iv.probs[0] == 1.0);
}

TEST_CASE("one step on a reversed star splits over the sources") {
  // B -> A and C -> A; walking from A follows reversed edges.
  const Snapshot s = snapshot_from_edges(3, {{1, 0}, {2, 0}});
  const InfluenceVector iv = influence(s, 0, 1);
  REQUIRE(iv.page_ids == std::vector<PageId>{1, 2});
  CHECK(iv.probs[0] == 0.5);
  CHECK(iv.probs[1] == 0.5);
}

TEST_CASE("reversed sinks hold the walker in place") {
  const Snapshot s = snapshot_from_edges(2, {{0, 1}});  // node 0 has no in-neighbors
  const InfluenceVector iv = influence(s, 0, 5);
  REQUIRE(iv.page_ids == std::vector<PageId>{0});
  CHECK(iv.probs[0] == 1.0);
}

TEST_CASE("influence contract violations") {
  const Snapshot s = snapshot_from_edges(2, {{0, 1}});
  CHECK_THROWS_AS(influence(s, 7, 1), ArgumentError);
  CHECK_THROWS_AS(influence(s, 0, -1), ArgumentError);
}

TEST_CASE("influence matches exhaustive walk enumeration on small graphs") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(uniform_index(rng, 11));
    const Snapshot s = random_digraph(rng, n, 0.3);
    const PageId origin = static_cast<PageId>(uniform_index(rng, n));
    const InfluenceVector iv = influence(s, origin, 5);
    const auto oracle = influence_walk_enumeration(s, origin, 5);
    REQUIRE(iv.page_ids.size() == oracle.size());
    for (std::size_t i = 0; i < iv.page_ids.size(); ++i) {
      const auto it = oracle.find(iv.page_ids[i]);
      REQUIRE(it != oracle.end());
      CHECK(iv.probs[i] == doctest::Approx(it->second).epsilon(1e-12));
    }
    double total = 0.0;
    for (double p : iv.probs) total += p;
    CHECK(std::abs(total - 1.0) < 1e-9);
  }
}

TEST_CASE("influence matches the matrix-power oracle on mid-size graphs") {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 3 + static_cast<int>(uniform_index(rng, 18));
    const Snapshot s = random_digraph(rng, n, 0.25);
    const PageId origin = static_cast<PageId>(uniform_index(rng, n));
    const InfluenceVector iv = influence(s, origin, 5);
    const std::vector<double> dense = influence_matrix_power(s, origin, 5);
    double l1 = 0.0;
    std::size_t sparse_i = 0;
    for (int node = 0; node < n; ++node) {
      double sparse_value = 0.0;
      if (sparse_i < iv.page_ids.size() && iv.page_ids[sparse_i] == node) {
        sparse_value = iv.probs[sparse_i++];
      }
      l1 += std::abs(sparse_value - dense[node]);
    }
    CHECK(l1 < 1e-10);
  }
}

TEST_CASE("overlap algebra: self-similarity, symmetry, the hand case") {
  const Snapshot s = snapshot_from_edges(4, {{1, 0}, {2, 0}, {3, 1}, {0, 3}});
  const InfluenceVector p = influence(s, 0, 3);
  const InfluenceVector q = influence(s, 3, 3);
  CHECK(overlap(p, p) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(overlap(p, q) == doctest::Approx(overlap(q, p)).epsilon(1e-15));
  CHECK(overlap(p, q) >= 0.0);
  CHECK(overlap(p, q) <= 1.0);

  InfluenceVector a, b;
  a.cutoff = b.cutoff = 0;
  a.steps = b.steps = 1;
  a.page_ids = {0, 1};
  a.probs = {0.5, 0.5};
  b.page_ids = {0, 2};
  b.probs = {0.5, 0.5};
  CHECK(overlap(a, b) == doctest::Approx(0.5).epsilon(1e-12));

  // Disjoint supports are orthogonal.
  b.page_ids = {2, 3};
  CHECK(overlap(a, b) == 0.0);
}

TEST_CASE("overlap rejects incompatible vectors") {
  InfluenceVector a, b;
  a.cutoff = 0;
  b.cutoff = 1;
  a.steps = b.steps = 2;
  a.page_ids = b.page_ids = {0};
  a.probs = b.probs = {1.0};
  CHECK_THROWS_AS(overlap(a, b), ArgumentError);
  b.cutoff = 0;
  b.steps = 3;
  CHECK_THROWS_AS(overlap(a, b), ArgumentError);
}

TEST_CASE("mean pairwise overlap averages the pair values and filters absent pages") {
  const Corpus corpus = fixture_corpus();
  const Snapshot s = build_snapshot(corpus, kNoCutoff);
  const std::vector<PageId> pages = {0, 1, 2, 15};
  const double mean = mean_pairwise_overlap(s, pages, 5);
  double expected = 0.0;
  int pairs = 0;
  for (std::size_t i = 0; i < pages.size(); ++i) {
    for (std::size_t j = i + 1; j < pages.size(); ++j) {
      expected += overlap(influence(s, pages[i], 5), influence(s, pages[j], 5));
      ++pairs;
    }
  }
  CHECK(mean == doctest::Approx(expected / pairs).epsilon(1e-12));

  // Identical-influence duplicates overlap perfectly.
  const Snapshot twins = snapshot_from_edges(4, {{0, 2}, {1, 2}, {3, 0}, {3, 1}});
  CHECK(mean_pairwise_overlap(twins, std::vector<PageId>{0, 1}, 2) ==
        doctest::Approx(1.0).epsilon(1e-12));

  // Pages created after the snapshot cutoff are excluded.
  const Snapshot early = build_snapshot(corpus, year_start(2002));
  CHECK_THROWS_AS(mean_pairwise_overlap(early, std::vector<PageId>{12, 13, 14}, 5),
                  NumericError);
}

TEST_CASE("long walks on a strongly connected aperiodic graph converge to full overlap") {
  // Directed ring with shortcuts: strongly connected and aperiodic.
  std::vector<std::pair<int, int>> edges;
  const int n = 9;
  for (int u = 0; u < n; ++u) {
    edges.emplace_back(u, (u + 1) % n);
    if (u % 3 == 0) edges.emplace_back(u, (u + 2) % n);
  }
  const Snapshot s = snapshot_from_edges(n, edges);
  const InfluenceVector p = influence(s, 0, 500);
  const InfluenceVector q = influence(s, 4, 500);
  CHECK(overlap(p, q) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("rewiring sources away from a shared region reduces overlap") {
  // P and Q share both in-neighbors; overlap at one step is 1.
  const Snapshot shared = snapshot_from_edges(4, {{2, 0}, {3, 0}, {2, 1}, {3, 1}});
  const double before =
      overlap(influence(shared, 0, 1), influence(shared, 1, 1));
  // P's in-links now come from elsewhere.
  const Snapshot rewired = snapshot_from_edges(6, {{4, 0}, {5, 0}, {2, 1}, {3, 1}});
  const double after =
      overlap(influence(rewired, 0, 1), influence(rewired, 1, 1));
  CHECK(before == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(after < before);
  CHECK(after == 0.0);
}
