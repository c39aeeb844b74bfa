#include "normnet/snapshot.hpp"

#include <algorithm>
#include <cmath>

#include "normnet/error.hpp"

namespace normnet {

std::optional<std::int32_t> Snapshot::index_of(PageId id) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), id);
  if (it == nodes.end() || *it != id) return std::nullopt;
  return static_cast<std::int32_t>(it - nodes.begin());
}

Snapshot build_snapshot(const Corpus& corpus, Timestamp cutoff) {
  Snapshot s;
  s.cutoff = cutoff;
  for (const Page& p : corpus.pages) {
    if (p.created_at <= cutoff) s.nodes.push_back(p.id);
  }
  s.out_neighbors.resize(s.nodes.size());
  s.in_neighbors.resize(s.nodes.size());
  for (const LinkEvent& e : corpus.links) {
    if (e.first_seen_at > cutoff) continue;
    const auto src = s.index_of(e.src);
    const auto dst = s.index_of(e.dst);
    if (!src || !dst) continue;
    s.edges.emplace_back(e.src, e.dst);
    s.out_neighbors[*src].push_back(*dst);
    s.in_neighbors[*dst].push_back(*src);
  }
  for (auto& adj : s.out_neighbors) std::sort(adj.begin(), adj.end());
  for (auto& adj : s.in_neighbors) std::sort(adj.begin(), adj.end());
  return s;
}

double density(const Snapshot& s) {
  const auto n = static_cast<double>(s.node_count());
  if (s.node_count() < 2) {
    throw ArgumentError("density is undefined for fewer than 2 nodes");
  }
  return static_cast<double>(s.edge_count()) / (n * (n - 1.0));
}

std::vector<PageId> giant_component(const Snapshot& s) {
  const std::size_t n = s.node_count();
  std::vector<std::int32_t> component(n, -1);
  std::int32_t n_components = 0;
  std::vector<std::int32_t> stack;
  for (std::size_t root = 0; root < n; ++root) {
    if (component[root] != -1) continue;
    const std::int32_t c = n_components++;
    component[root] = c;
    stack.push_back(static_cast<std::int32_t>(root));
    while (!stack.empty()) {
      const std::int32_t u = stack.back();
      stack.pop_back();
      for (const auto& adj : {&s.out_neighbors[u], &s.in_neighbors[u]}) {
        for (std::int32_t v : *adj) {
          if (component[v] == -1) {
            component[v] = c;
            stack.push_back(v);
          }
        }
      }
    }
  }
  std::vector<std::size_t> sizes(n_components, 0);
  for (std::int32_t c : component) ++sizes[c];
  std::int32_t best = -1;
  std::size_t best_size = 0;
  // Component ids are assigned in order of smallest member index, so the
  // first maximal component wins ties by smallest member id.
  for (std::int32_t c = 0; c < n_components; ++c) {
    if (sizes[c] > best_size) {
      best = c;
      best_size = sizes[c];
    }
  }
  std::vector<PageId> result;
  if (best < 0) return result;
  result.reserve(best_size);
  for (std::size_t i = 0; i < n; ++i) {
    if (component[i] == best) result.push_back(s.nodes[i]);
  }
  return result;
}

Snapshot induced_subgraph(const Snapshot& s, std::span<const PageId> keep) {
  Snapshot out;
  out.cutoff = s.cutoff;
  for (PageId id : keep) {
    if (s.index_of(id)) out.nodes.push_back(id);
  }
  std::sort(out.nodes.begin(), out.nodes.end());
  out.nodes.erase(std::unique(out.nodes.begin(), out.nodes.end()), out.nodes.end());
  out.out_neighbors.resize(out.nodes.size());
  out.in_neighbors.resize(out.nodes.size());
  for (const auto& [src, dst] : s.edges) {
    const auto u = out.index_of(src);
    const auto v = out.index_of(dst);
    if (!u || !v) continue;
    out.edges.emplace_back(src, dst);
    out.out_neighbors[*u].push_back(*v);
    out.in_neighbors[*v].push_back(*u);
  }
  for (auto& adj : out.out_neighbors) std::sort(adj.begin(), adj.end());
  for (auto& adj : out.in_neighbors) std::sort(adj.begin(), adj.end());
  return out;
}

GrowthRate in_degree_growth_rates(const std::vector<Snapshot>& snapshots, int degree_cap) {
  if (snapshots.size() < 2) {
    throw ArgumentError("in-degree growth needs at least 2 snapshots");
  }
  std::vector<double> rates;
  for (std::size_t t = 0; t + 1 < snapshots.size(); ++t) {
    const Snapshot& a = snapshots[t];
    const Snapshot& b = snapshots[t + 1];
    for (std::size_t i = 0; i < a.node_count(); ++i) {
      const auto j = b.index_of(a.nodes[i]);
      if (!j) continue;  // node absent later: cannot happen on monotone snapshots
      const auto deg_t = static_cast<double>(a.in_neighbors[i].size());
      if (deg_t >= degree_cap) continue;
      const auto deg_t1 = static_cast<double>(b.in_neighbors[*j].size());
      rates.push_back((deg_t1 + 1.0) / (deg_t + 1.0) - 1.0);
    }
  }
  if (rates.empty()) {
    throw NumericError("no qualifying node-years below degree cap " +
                       std::to_string(degree_cap));
  }
  GrowthRate g;
  g.n_node_years = rates.size();
  double sum = 0.0;
  for (double r : rates) sum += r;
  g.mean = sum / static_cast<double>(rates.size());
  if (rates.size() > 1) {
    double ss = 0.0;
    for (double r : rates) ss += (r - g.mean) * (r - g.mean);
    const double sd = std::sqrt(ss / static_cast<double>(rates.size() - 1));
    g.std_error = sd / std::sqrt(static_cast<double>(rates.size()));
  }
  return g;
}

}  // namespace normnet
