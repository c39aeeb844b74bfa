#include "normnet/community.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>

#include "normnet/error.hpp"
#include "normnet/rng.hpp"

namespace normnet {

namespace {

// Undirected weighted graph in the Newman convention: an edge {u,v} is
// listed from both sides; a self-loop is listed once with its full A_ii
// contribution. k_i is the row sum, so 2m = sum_i k_i.
struct WeightedGraph {
  std::vector<std::vector<std::pair<std::int32_t, double>>> adj;
  std::vector<double> degree;
  double two_m = 0.0;

  std::size_t size() const { return adj.size(); }
};

WeightedGraph undirected_projection(const Snapshot& s) {
  WeightedGraph g;
  g.adj.resize(s.node_count());
  std::vector<std::pair<std::int32_t, std::int32_t>> pairs;
  pairs.reserve(s.edges.size());
  for (std::size_t u = 0; u < s.node_count(); ++u) {
    for (std::int32_t v : s.out_neighbors[u]) {
      const auto a = static_cast<std::int32_t>(u);
      pairs.emplace_back(std::min(a, v), std::max(a, v));
    }
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  for (const auto& [a, b] : pairs) {
    g.adj[a].emplace_back(b, 1.0);
    g.adj[b].emplace_back(a, 1.0);
  }
  g.degree.resize(g.size(), 0.0);
  for (std::size_t u = 0; u < g.size(); ++u) {
    for (const auto& [v, w] : g.adj[u]) g.degree[u] += w;
    g.two_m += g.degree[u];
  }
  return g;
}

// One round of local moving. Returns true if any node changed community.
bool one_level(const WeightedGraph& g, std::vector<std::int32_t>& node_comm,
               std::mt19937_64& rng) {
  const std::size_t n = g.size();
  std::vector<double> comm_total(n, 0.0);
  for (std::size_t u = 0; u < n; ++u) comm_total[node_comm[u]] += g.degree[u];

  std::vector<std::int32_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  shuffle_in_place(order, rng);

  bool any_move = false;
  bool moved = true;
  std::vector<double> weight_to(n, 0.0);
  std::vector<std::int32_t> touched;
  while (moved) {
    moved = false;
    for (std::int32_t u : order) {
      touched.clear();
      for (const auto& [v, w] : g.adj[u]) {
        if (v == u) continue;
        const std::int32_t c = node_comm[v];
        if (weight_to[c] == 0.0) touched.push_back(c);
        weight_to[c] += w;
      }
      std::sort(touched.begin(), touched.end());

      const std::int32_t old_comm = node_comm[u];
      comm_total[old_comm] -= g.degree[u];
      std::int32_t best_comm = old_comm;
      double best_gain = weight_to[old_comm] - g.degree[u] * comm_total[old_comm] / g.two_m;
      for (std::int32_t c : touched) {
        if (c == old_comm) continue;
        const double gain = weight_to[c] - g.degree[u] * comm_total[c] / g.two_m;
        if (gain > best_gain) {
          best_gain = gain;
          best_comm = c;
        }
      }
      comm_total[best_comm] += g.degree[u];
      node_comm[u] = best_comm;
      if (best_comm != old_comm) {
        moved = true;
        any_move = true;
      }
      for (std::int32_t c : touched) weight_to[c] = 0.0;
    }
  }
  return any_move;
}

// Renumber communities by first appearance; returns the community count.
std::int32_t compact_labels(std::vector<std::int32_t>& labels) {
  std::vector<std::int32_t> remap(labels.size(), -1);
  std::int32_t next = 0;
  for (std::int32_t& c : labels) {
    if (remap[c] == -1) remap[c] = next++;
    c = remap[c];
  }
  return next;
}

WeightedGraph aggregate(const WeightedGraph& g, const std::vector<std::int32_t>& node_comm,
                        std::int32_t n_comms) {
  WeightedGraph out;
  out.adj.resize(n_comms);
  std::vector<std::map<std::int32_t, double>> acc(n_comms);
  for (std::size_t u = 0; u < g.size(); ++u) {
    for (const auto& [v, w] : g.adj[u]) {
      acc[node_comm[u]][node_comm[v]] += w;
    }
  }
  out.degree.resize(n_comms, 0.0);
  for (std::int32_t c = 0; c < n_comms; ++c) {
    for (const auto& [d, w] : acc[c]) {
      out.adj[c].emplace_back(d, w);
      out.degree[c] += w;
    }
    out.two_m += out.degree[c];
  }
  return out;
}

double weighted_modularity(const WeightedGraph& g, const std::vector<std::int32_t>& node_comm,
                           std::int32_t n_comms) {
  if (g.two_m == 0.0) return 0.0;
  std::vector<double> internal(n_comms, 0.0), total(n_comms, 0.0);
  for (std::size_t u = 0; u < g.size(); ++u) {
    total[node_comm[u]] += g.degree[u];
    for (const auto& [v, w] : g.adj[u]) {
      if (node_comm[v] == node_comm[u]) internal[node_comm[u]] += w;
    }
  }
  double q = 0.0;
  for (std::int32_t c = 0; c < n_comms; ++c) {
    q += internal[c] / g.two_m - (total[c] / g.two_m) * (total[c] / g.two_m);
  }
  return q;
}

}  // namespace

// Multilevel pass with one visit-order stream; returns the level-0 labels.
static std::vector<std::int32_t> louvain_single_run(const WeightedGraph& base,
                                                    std::mt19937_64& rng) {
  std::vector<std::int32_t> global(base.size());
  std::iota(global.begin(), global.end(), 0);
  WeightedGraph level = base;
  while (true) {
    std::vector<std::int32_t> node_comm(level.size());
    std::iota(node_comm.begin(), node_comm.end(), 0);
    const bool improved = one_level(level, node_comm, rng);
    const std::int32_t n_comms = compact_labels(node_comm);
    for (std::int32_t& c : global) c = node_comm[c];
    if (!improved || static_cast<std::size_t>(n_comms) == level.size()) break;
    level = aggregate(level, node_comm, n_comms);
  }
  return global;
}

// Visit orders occasionally trap the greedy pass in a local optimum; a few
// seed-derived restarts make small-graph results match exhaustive search.
constexpr int kLouvainRestarts = 10;

Partition louvain(const Snapshot& s, std::uint64_t seed) {
  const std::size_t n = s.node_count();
  if (n == 0) throw ArgumentError("louvain needs a nonempty snapshot");

  Partition p;
  p.cutoff = s.cutoff;
  p.page_ids = s.nodes;
  p.clusters.assign(n, 0);

  const WeightedGraph base = undirected_projection(s);
  std::vector<std::int32_t> global(n);
  std::iota(global.begin(), global.end(), 0);
  double best_q = base.two_m > 0.0 ? weighted_modularity(base, global, compact_labels(global))
                                   : 0.0;

  if (base.two_m > 0.0) {
    std::mt19937_64 rng(seed);
    for (int restart = 0; restart < kLouvainRestarts; ++restart) {
      std::vector<std::int32_t> candidate = louvain_single_run(base, rng);
      const double q = weighted_modularity(base, candidate, compact_labels(candidate));
      if (q > best_q) {
        best_q = q;
        global = std::move(candidate);
      }
    }
  }

  const std::int32_t n_comms = compact_labels(global);
  p.modularity = best_q;

  // Renumber by size descending, ties by smallest member node index.
  std::vector<std::size_t> sizes(n_comms, 0);
  std::vector<std::int32_t> first_member(n_comms, static_cast<std::int32_t>(n));
  for (std::size_t i = 0; i < n; ++i) {
    ++sizes[global[i]];
    first_member[global[i]] =
        std::min(first_member[global[i]], static_cast<std::int32_t>(i));
  }
  std::vector<std::int32_t> order(n_comms);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
    if (sizes[a] != sizes[b]) return sizes[a] > sizes[b];
    return first_member[a] < first_member[b];
  });
  std::vector<std::int32_t> remap(n_comms);
  for (std::int32_t rank = 0; rank < n_comms; ++rank) remap[order[rank]] = rank;
  for (std::size_t i = 0; i < n; ++i) p.clusters[i] = remap[global[i]];
  p.n_clusters = n_comms;
  return p;
}

double modularity(const Snapshot& s, std::span<const std::int32_t> assignment) {
  if (assignment.size() != s.node_count()) {
    throw ArgumentError("modularity: assignment length does not match snapshot");
  }
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] < 0) {
      throw ArgumentError("modularity: node id " + std::to_string(s.nodes[i]) +
                          " is unassigned");
    }
  }
  const WeightedGraph g = undirected_projection(s);
  std::int32_t n_comms = 0;
  for (std::int32_t c : assignment) n_comms = std::max(n_comms, c + 1);
  return weighted_modularity(g, std::vector<std::int32_t>(assignment.begin(), assignment.end()),
                             n_comms);
}

LocalClustering local_clustering(const Snapshot& s) {
  const std::size_t n = s.node_count();
  LocalClustering lc;
  lc.per_node.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::int32_t> nbrs;
    nbrs.reserve(s.out_neighbors[i].size() + s.in_neighbors[i].size());
    std::set_union(s.out_neighbors[i].begin(), s.out_neighbors[i].end(),
                   s.in_neighbors[i].begin(), s.in_neighbors[i].end(),
                   std::back_inserter(nbrs));
    if (nbrs.size() < 2) continue;
    std::size_t linked = 0;
    for (std::int32_t j : nbrs) {
      for (std::int32_t k : s.out_neighbors[j]) {
        if (k == static_cast<std::int32_t>(i)) continue;
        if (std::binary_search(nbrs.begin(), nbrs.end(), k)) ++linked;
      }
    }
    const auto d = static_cast<double>(nbrs.size());
    lc.per_node[i] = static_cast<double>(linked) / (d * (d - 1.0));
  }
  for (double v : lc.per_node) lc.sum += v;
  lc.average = n > 0 ? lc.sum / static_cast<double>(n) : 0.0;
  return lc;
}

std::vector<ClusterSummary> summarize_clusters(const Partition& partition,
                                               const CentralityVector& cv, const TopicModel& tm,
                                               const Corpus& corpus, int top_k) {
  if (partition.page_ids.empty()) throw ArgumentError("summarize_clusters: empty partition");
  if (top_k < 1) throw ArgumentError("summarize_clusters: top_k must be >= 1");
  if (partition.cutoff != cv.cutoff || partition.page_ids != cv.page_ids) {
    throw ArgumentError("summarize_clusters: partition and centrality disagree on the snapshot");
  }

  std::vector<std::vector<std::size_t>> members(partition.n_clusters);
  for (std::size_t i = 0; i < partition.page_ids.size(); ++i) {
    members[partition.clusters[i]].push_back(i);
  }

  const double total = static_cast<double>(partition.page_ids.size());
  std::vector<ClusterSummary> summaries;
  summaries.reserve(members.size());
  for (std::int32_t c = 0; c < partition.n_clusters; ++c) {
    ClusterSummary cs;
    cs.cluster = c;
    cs.size = members[c].size();
    cs.size_fraction = static_cast<double>(members[c].size()) / total;

    std::vector<std::size_t> by_score = members[c];
    std::sort(by_score.begin(), by_score.end(), [&](std::size_t a, std::size_t b) {
      if (cv.scores[a] != cv.scores[b]) return cv.scores[a] > cv.scores[b];
      return cv.page_ids[a] < cv.page_ids[b];
    });
    for (std::size_t i = 0; i < by_score.size() && i < static_cast<std::size_t>(top_k); ++i) {
      cs.top_pages.push_back(cv.page_ids[by_score[i]]);
    }

    std::vector<PageId> member_ids;
    member_ids.reserve(members[c].size());
    for (std::size_t i : members[c]) member_ids.push_back(partition.page_ids[i]);
    const std::vector<double> profile = cluster_topic_profile(tm, member_ids);
    cs.dominant_topic = static_cast<int>(
        std::max_element(profile.begin(), profile.end()) - profile.begin());

    // Plurality norm class; ties resolved in declaration order.
    std::array<std::size_t, 4> class_counts{};
    for (PageId id : member_ids) {
      const Page* page = corpus.find(id);
      if (page != nullptr && page->norm_class) {
        ++class_counts[static_cast<std::size_t>(*page->norm_class)];
      }
    }
    std::size_t best = 0, best_count = 0;
    for (std::size_t i = 0; i < class_counts.size(); ++i) {
      if (class_counts[i] > best_count) {
        best_count = class_counts[i];
        best = i;
      }
    }
    if (best_count > 0) cs.norm_class = static_cast<NormClass>(best);
    summaries.push_back(std::move(cs));
  }
  return summaries;
}

}  // namespace normnet
