#include <doctest.h>

#include <algorithm>
#include <set>

#include "normnet/community.hpp"
#include "normnet/error.hpp"
#include "normnet/rng.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace normnet;
using namespace normnet::testing;

namespace {

// Two directed 4-cliques joined by one edge.
Snapshot two_cliques() {
  std::vector<std::pair<int, int>> edges;
  for (int base : {0, 4}) {
    for (int u = 0; u < 4; ++u) {
      for (int v = 0; v < 4; ++v) {
        if (u != v) edges.emplace_back(base + u, base + v);
      }
    }
  }
  edges.emplace_back(3, 4);
  return snapshot_from_edges(8, edges);
}

}  // namespace

TEST_CASE("louvain recovers the two planted cliques") {
  const Snapshot s = two_cliques();
  const Partition p = louvain(s, 0);
  CHECK(p.n_clusters == 2);
  const std::set<std::int32_t> left(p.clusters.begin(), p.clusters.begin() + 4);
  const std::set<std::int32_t> right(p.clusters.begin() + 4, p.clusters.end());
  CHECK(left.size() == 1);
  CHECK(right.size() == 1);
  CHECK(*left.begin() != *right.begin());

  // Equals the exhaustive maximum over all 4140 partitions of 8 nodes.
  const BestPartition best = brute_force_best_partition(s);
  CHECK(p.modularity == doctest::Approx(best.modularity).epsilon(1e-12));
}

TEST_CASE("louvain degenerate graphs") {
  // A single clique stays one community.
  std::vector<std::pair<int, int>> clique;
  for (int u = 0; u < 5; ++u) {
    for (int v = 0; v < 5; ++v) {
      if (u != v) clique.emplace_back(u, v);
    }
  }
  CHECK(louvain(snapshot_from_edges(5, clique), 0).n_clusters == 1);

  const Partition singleton = louvain(snapshot_from_edges(1, {}), 0);
  CHECK(singleton.n_clusters == 1);
  CHECK(singleton.modularity == 0.0);

  // No edges: every node is its own cluster, modularity 0.
  const Partition empty_edges = louvain(snapshot_from_edges(4, {}), 0);
  CHECK(empty_edges.n_clusters == 4);
  CHECK(empty_edges.modularity == 0.0);

  CHECK_THROWS_AS(louvain(snapshot_from_edges(0, {}), 0), ArgumentError);
}

TEST_CASE("louvain modularity matches the public recomputation to 1e-12") {
  std::mt19937_64 rng(83);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 3 + static_cast<int>(uniform_index(rng, 30));
    const Snapshot s = random_digraph(rng, n, 2.0 / n);
    const Partition p = louvain(s, trial);
    CHECK(p.modularity == doctest::Approx(modularity(s, p.clusters)).epsilon(1e-12));
    // Not worse than the trivial partitions.
    CHECK(p.modularity >= modularity(s, std::vector<std::int32_t>(n, 0)) - 1e-12);
    std::vector<std::int32_t> singletons(n);
    for (int i = 0; i < n; ++i) singletons[i] = i;
    CHECK(p.modularity >= modularity(s, singletons) - 1e-12);
  }
}

TEST_CASE("louvain equals brute force on every 4-node digraph") {
  // All 2^12 directed graphs on 4 labeled nodes, deduplicated by their
  // undirected projection via the oracle.
  std::vector<std::pair<int, int>> all_arcs;
  for (int u = 0; u < 4; ++u) {
    for (int v = 0; v < 4; ++v) {
      if (u != v) all_arcs.emplace_back(u, v);
    }
  }
  for (int mask = 0; mask < (1 << 12); mask += 7) {  // stride keeps runtime modest
    std::vector<std::pair<int, int>> edges;
    for (int bit = 0; bit < 12; ++bit) {
      if (mask & (1 << bit)) edges.push_back(all_arcs[bit]);
    }
    const Snapshot s = snapshot_from_edges(4, edges);
    const Partition p = louvain(s, 1);
    const BestPartition best = brute_force_best_partition(s);
    CHECK(p.modularity == doctest::Approx(best.modularity).epsilon(1e-12));
  }
}

TEST_CASE("modularity hand values and contract") {
  const Snapshot square = snapshot_from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  CHECK(modularity(square, std::vector<std::int32_t>{0, 0, 0, 0}) == 0.0);
  CHECK(modularity(square, std::vector<std::int32_t>{0, 1, 2, 3}) ==
        doctest::Approx(-0.25).epsilon(1e-12));

  const Snapshot s = two_cliques();
  const std::vector<std::int32_t> planted = {0, 0, 0, 0, 1, 1, 1, 1};
  CHECK(modularity(s, planted) ==
        doctest::Approx(modularity_from_definition(s, planted)).epsilon(1e-12));

  CHECK_THROWS_AS(modularity(square, std::vector<std::int32_t>{0, 0, 0}), ArgumentError);
  CHECK_THROWS_AS(modularity(square, std::vector<std::int32_t>{0, 0, -1, 0}), ArgumentError);
}

TEST_CASE("local clustering on hand graphs") {
  // Fully reciprocal triangle: every neighborhood is complete.
  const Snapshot triangle =
      snapshot_from_edges(3, {{0, 1}, {1, 0}, {1, 2}, {2, 1}, {0, 2}, {2, 0}});
  const LocalClustering lc = local_clustering(triangle);
  for (double v : lc.per_node) CHECK(v == 1.0);
  CHECK(lc.average == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(lc.sum == doctest::Approx(3.0).epsilon(1e-12));

  // Out-star: no links among the hub's neighbors, leaves have one neighbor.
  const Snapshot star = snapshot_from_edges(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  const LocalClustering star_lc = local_clustering(star);
  for (double v : star_lc.per_node) CHECK(v == 0.0);
  CHECK(star_lc.average == 0.0);

  // One-directional triangle: each neighborhood has one of two possible arcs.
  const Snapshot cycle = snapshot_from_edges(3, {{0, 1}, {1, 2}, {2, 0}});
  for (double v : local_clustering(cycle).per_node) {
    CHECK(v == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("local clustering stays in range and is permutation equivariant") {
  std::mt19937_64 rng(89);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + static_cast<int>(uniform_index(rng, 25));
    const Snapshot s = random_digraph(rng, n, 0.2);
    const LocalClustering lc = local_clustering(s);
    for (double v : lc.per_node) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    shuffle_in_place(perm, rng);
    std::vector<std::pair<int, int>> relabeled;
    for (const auto& [u, v] : s.edges) relabeled.emplace_back(perm[u], perm[v]);
    const LocalClustering lc2 = local_clustering(snapshot_from_edges(n, relabeled));
    for (int u = 0; u < n; ++u) {
      CHECK(lc.per_node[u] == doctest::Approx(lc2.per_node[perm[u]]).epsilon(1e-12));
    }
  }
}

TEST_CASE("summarize_clusters digests a partitioned snapshot") {
  const Corpus corpus = fixture_corpus();
  const Snapshot s = build_snapshot(corpus, kNoCutoff);
  const Partition part = louvain(s, 0);
  const CentralityVector cv = eigenvector_centrality(s);

  TopicModel tm;
  tm.k = 2;
  for (const Page& p : corpus.pages) {
    tm.page_ids.push_back(p.id);
    // Alpha pages lean on topic 0, Beta pages on topic 1.
    tm.page_topic.push_back(p.id < 15 ? std::vector<double>{0.8, 0.2}
                                      : std::vector<double>{0.2, 0.8});
  }

  const auto summaries = summarize_clusters(part, cv, tm, corpus, 3);
  REQUIRE(summaries.size() == static_cast<std::size_t>(part.n_clusters));
  double fraction_total = 0.0;
  for (std::size_t c = 0; c < summaries.size(); ++c) {
    const ClusterSummary& cs = summaries[c];
    fraction_total += cs.size_fraction;
    CHECK(cs.top_pages.size() <= 3);
    if (c > 0) CHECK(summaries[c - 1].size >= cs.size);
    // Top pages are ranked by centrality within the cluster.
    for (std::size_t i = 1; i < cs.top_pages.size(); ++i) {
      CHECK(*cv.score_of(cs.top_pages[i - 1]) >= *cv.score_of(cs.top_pages[i]));
    }
  }
  CHECK(fraction_total == doctest::Approx(1.0).epsilon(1e-9));

  CHECK_THROWS_AS(summarize_clusters(Partition{}, cv, tm, corpus, 3), ArgumentError);
}

TEST_CASE("summarize_clusters on the planted two-clique fixture") {
  // Build a corpus whose final snapshot is the two-clique graph.
  Corpus corpus;
  const Timestamp t0 = to_timestamp({2001, 1, 1, 0, 0, 0});
  for (int i = 0; i < 8; ++i) {
    Page p;
    p.id = i;
    p.title = "Page_" + std::to_string(i);
    p.created_at = t0;
    p.norm_class = i < 4 ? NormClass::user_content : NormClass::user_admin;
    corpus.pages.push_back(std::move(p));
  }
  for (int base : {0, 4}) {
    for (int u = 0; u < 4; ++u) {
      for (int v = 0; v < 4; ++v) {
        if (u != v) corpus.links.push_back({base + u, base + v, t0});
      }
    }
  }
  corpus.links.push_back({3, 4, t0});
  std::sort(corpus.links.begin(), corpus.links.end(),
            [](const LinkEvent& a, const LinkEvent& b) {
              return std::pair{a.src, a.dst} < std::pair{b.src, b.dst};
            });
  corpus.validate();

  const Snapshot s = build_snapshot(corpus, kNoCutoff);
  const Partition part = louvain(s, 0);
  REQUIRE(part.n_clusters == 2);
  const CentralityVector cv = eigenvector_centrality(s);
  TopicModel tm;
  tm.k = 2;
  for (int i = 0; i < 8; ++i) {
    tm.page_ids.push_back(i);
    tm.page_topic.push_back(i < 4 ? std::vector<double>{1.0, 0.0}
                                  : std::vector<double>{0.0, 1.0});
  }
  const auto summaries = summarize_clusters(part, cv, tm, corpus, 10);
  REQUIRE(summaries.size() == 2);
  CHECK(summaries[0].size_fraction == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(summaries[1].size_fraction == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(summaries[0].dominant_topic != summaries[1].dominant_topic);
  REQUIRE(summaries[0].norm_class.has_value());
  REQUIRE(summaries[1].norm_class.has_value());
  CHECK(*summaries[0].norm_class != *summaries[1].norm_class);
}
