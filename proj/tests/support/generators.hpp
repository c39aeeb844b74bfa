#pragma once

#include <filesystem>
#include <random>
#include <utility>
#include <vector>

#include "normnet/corpus.hpp"
#include "normnet/snapshot.hpp"

namespace normnet::testing {

// A standalone snapshot over nodes 0..n-1 (no corpus behind it).
Snapshot snapshot_from_edges(int n, const std::vector<std::pair<int, int>>& edges);

// Erdos-Renyi style digraph, self-edges excluded.
Snapshot random_digraph(std::mt19937_64& rng, int n, double edge_probability);

std::vector<double> random_mixture(std::mt19937_64& rng, int k);

// Deterministic 30-page corpus with two planted link/vocabulary
// communities, six growth years (2001-2006), attention counters correlated
// with in-degree, a population series and token text. Used across the
// pipeline tests.
Corpus fixture_corpus();

// Preferential-attachment corpus: nodes arrive over `years` yearly waves
// and link to `links_per_node` existing nodes with probability
// proportional to in-degree + 1.
Corpus preferential_attachment_corpus(int n_nodes, int years, int links_per_node,
                                      std::uint64_t seed);

// Writes everything the CLI tests need under `dir`: corpus/, labels.tsv,
// config.cfg, plus an intentionally empty corpus with its own config.
void write_cli_fixture(const std::filesystem::path& dir);

}  // namespace normnet::testing
