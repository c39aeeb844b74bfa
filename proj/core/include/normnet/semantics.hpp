#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "normnet/corpus.hpp"
#include "normnet/snapshot.hpp"

namespace normnet {

struct TokenDistribution {
  PageId page = -1;
  std::map<std::string, std::int64_t> counts;
  std::int64_t total = 0;
};

// One-gram normalization: lowercase, merge hyphenated words, drop
// punctuation, split on whitespace. No stemming, no spell correction.
TokenDistribution tokenize(std::string_view raw_text);

struct LdaOptions {
  int topics = 20;
  std::uint64_t seed = 0;
  int sweeps = 2000;
  double alpha = -1.0;  // negative means 50 / topics
  double beta = 0.01;
};

// Collapsed-Gibbs topic model. Fully reproducible for a fixed seed; the
// integer count state is kept so a serialized model reloads exactly.
struct TopicModel {
  int k = 0;
  std::uint64_t seed = 0;
  double alpha = 0.0;
  double beta = 0.0;
  int sweeps = 0;
  std::vector<std::string> vocabulary;               // sorted
  std::vector<PageId> page_ids;                      // ascending
  std::vector<std::vector<double>> topic_word;       // k x V, row-stochastic
  std::vector<std::vector<double>> page_topic;       // |pages| x k, each sums to 1
  std::vector<std::vector<std::int64_t>> topic_word_counts;  // k x V
  std::vector<std::vector<std::int64_t>> page_topic_counts;  // |pages| x k

  const std::vector<double>* mixture_of(PageId id) const;  // nullptr when absent
  // Fraction of all word instances assigned to each topic.
  std::vector<double> topic_prevalence() const;
};

TopicModel fit_lda(std::span<const TokenDistribution> documents, const LdaOptions& opt = {});

// model.json + topic_word.tsv + page_topic.tsv, plus the integer count
// files used for exact reload.
void write_topic_model(const TopicModel& tm, const std::filesystem::path& dir);
TopicModel read_topic_model(const std::filesystem::path& dir);

// Top words of a topic by probability. When filter_for_report is set, the
// reporting stopword rule is applied: "wikipedia", date/time terms, and
// plural forms whose singular is also a candidate (except "wikipedias").
std::vector<std::string> representative_words(const TopicModel& tm, int topic, int count,
                                              bool filter_for_report = true);

// Jensen-Shannon distance: sqrt of the base-2 Jensen-Shannon divergence.
// A metric on distributions of equal length, range [0,1].
double jsd(std::span<const double> a, std::span<const double> b);

struct CoherenceScore {
  PageId page = -1;
  int steps = 0;
  double value = 0.0;  // in [-1, 1]
};

// Pearson correlation between the origin's influence p_i and the negative
// Jensen-Shannon distance to each influenced page, over the influence
// support excluding the origin itself.
CoherenceScore semantic_coherence(const Snapshot& s, const TopicModel& tm, PageId origin,
                                  int steps = 5);

// Unweighted mean of the member pages' topic mixtures.
std::vector<double> cluster_topic_profile(const TopicModel& tm, std::span<const PageId> cluster);

}  // namespace normnet
