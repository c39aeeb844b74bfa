#include "normnet/semantics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "normnet/error.hpp"
#include "normnet/format.hpp"
#include "normnet/influence.hpp"
#include "normnet/rng.hpp"
#include "normnet/stats.hpp"

namespace normnet {

namespace {

bool is_ascii_alnum(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

const std::set<std::string>& datetime_stopwords() {
  static const std::set<std::string> kWords = {
      "january", "february", "march",     "april",   "may",      "june",
      "july",    "august",   "september", "october", "november", "december",
      "monday",  "tuesday",  "wednesday", "thursday", "friday",  "saturday",
      "sunday",  "utc",      "gmt"};
  return kWords;
}

}  // namespace

TokenDistribution tokenize(std::string_view raw_text) {
  TokenDistribution dist;
  std::string token;
  const auto flush = [&] {
    if (!token.empty()) {
      auto [it, inserted] = dist.counts.emplace(token, 1);
      if (!inserted) ++it->second;
      ++dist.total;
      token.clear();
    }
  };
  for (unsigned char c : raw_text) {
    if (std::isspace(c)) {
      flush();
    } else if (is_ascii_alnum(c)) {
      token.push_back(static_cast<char>(std::tolower(c)));
    } else if (c >= 0x80) {
      token.push_back(static_cast<char>(c));  // keep non-ASCII bytes as-is
    }
    // remaining ASCII punctuation (hyphens, apostrophes, ...) is dropped
  }
  flush();
  return dist;
}

const std::vector<double>* TopicModel::mixture_of(PageId id) const {
  auto it = std::lower_bound(page_ids.begin(), page_ids.end(), id);
  if (it == page_ids.end() || *it != id) return nullptr;
  return &page_topic[static_cast<std::size_t>(it - page_ids.begin())];
}

std::vector<double> TopicModel::topic_prevalence() const {
  std::vector<double> totals(k, 0.0);
  double grand = 0.0;
  for (int t = 0; t < k; ++t) {
    for (std::int64_t c : topic_word_counts[t]) totals[t] += static_cast<double>(c);
    grand += totals[t];
  }
  if (grand > 0.0) {
    for (double& v : totals) v /= grand;
  }
  return totals;
}

namespace {

// Point estimates from the count state; shared by fit and reload so a
// round-tripped model is bit-identical.
void finalize_distributions(TopicModel& tm) {
  const std::size_t v_size = tm.vocabulary.size();
  tm.topic_word.assign(tm.k, std::vector<double>(v_size, 0.0));
  for (int t = 0; t < tm.k; ++t) {
    std::int64_t row_total = 0;
    for (std::int64_t c : tm.topic_word_counts[t]) row_total += c;
    const double denom = static_cast<double>(row_total) + static_cast<double>(v_size) * tm.beta;
    for (std::size_t w = 0; w < v_size; ++w) {
      tm.topic_word[t][w] =
          (static_cast<double>(tm.topic_word_counts[t][w]) + tm.beta) / denom;
    }
  }
  tm.page_topic.assign(tm.page_ids.size(), std::vector<double>(tm.k, 0.0));
  for (std::size_t d = 0; d < tm.page_ids.size(); ++d) {
    std::int64_t doc_total = 0;
    for (std::int64_t c : tm.page_topic_counts[d]) doc_total += c;
    const double denom =
        static_cast<double>(doc_total) + static_cast<double>(tm.k) * tm.alpha;
    for (int t = 0; t < tm.k; ++t) {
      tm.page_topic[d][t] =
          (static_cast<double>(tm.page_topic_counts[d][t]) + tm.alpha) / denom;
    }
  }
}

}  // namespace

TopicModel fit_lda(std::span<const TokenDistribution> documents, const LdaOptions& opt) {
  if (opt.topics < 2) throw ArgumentError("fit_lda: needs at least 2 topics");
  if (documents.size() < static_cast<std::size_t>(opt.topics)) {
    throw ArgumentError("fit_lda: topic count exceeds document count");
  }
  if (opt.sweeps < 0) throw ArgumentError("fit_lda: negative sweep count");

  TopicModel tm;
  tm.k = opt.topics;
  tm.seed = opt.seed;
  tm.alpha = opt.alpha < 0.0 ? 50.0 / static_cast<double>(opt.topics) : opt.alpha;
  tm.beta = opt.beta;
  tm.sweeps = opt.sweeps;

  std::set<std::string> vocab_set;
  for (const TokenDistribution& doc : documents) {
    for (const auto& [word, count] : doc.counts) {
      if (count > 0) vocab_set.insert(word);
    }
  }
  if (vocab_set.empty()) throw ArgumentError("fit_lda: empty vocabulary");
  tm.vocabulary.assign(vocab_set.begin(), vocab_set.end());
  std::map<std::string_view, std::int32_t> word_index;
  for (std::size_t w = 0; w < tm.vocabulary.size(); ++w) {
    word_index.emplace(tm.vocabulary[w], static_cast<std::int32_t>(w));
  }
  const std::size_t v_size = tm.vocabulary.size();

  // Flatten the corpus into word instances with per-document extents.
  std::vector<std::int32_t> instance_word;
  std::vector<std::size_t> doc_begin(documents.size() + 1, 0);
  tm.page_ids.reserve(documents.size());
  for (std::size_t d = 0; d < documents.size(); ++d) {
    tm.page_ids.push_back(documents[d].page);
    for (const auto& [word, count] : documents[d].counts) {
      const std::int32_t w = word_index.at(word);
      for (std::int64_t c = 0; c < count; ++c) instance_word.push_back(w);
    }
    doc_begin[d + 1] = instance_word.size();
  }

  const int k = tm.k;
  std::vector<std::int16_t> assignment(instance_word.size());
  std::vector<std::int64_t> n_topic(k, 0);
  tm.topic_word_counts.assign(k, std::vector<std::int64_t>(v_size, 0));
  tm.page_topic_counts.assign(documents.size(), std::vector<std::int64_t>(k, 0));

  std::mt19937_64 rng(tm.seed);
  for (std::size_t d = 0; d < documents.size(); ++d) {
    for (std::size_t i = doc_begin[d]; i < doc_begin[d + 1]; ++i) {
      const int t = static_cast<int>(uniform_index(rng, k));
      assignment[i] = static_cast<std::int16_t>(t);
      ++n_topic[t];
      ++tm.topic_word_counts[t][instance_word[i]];
      ++tm.page_topic_counts[d][t];
    }
  }

  const double beta_total = static_cast<double>(v_size) * tm.beta;
  std::vector<double> weights(k);
  for (int sweep = 0; sweep < tm.sweeps; ++sweep) {
    for (std::size_t d = 0; d < documents.size(); ++d) {
      auto& doc_counts = tm.page_topic_counts[d];
      for (std::size_t i = doc_begin[d]; i < doc_begin[d + 1]; ++i) {
        const std::int32_t w = instance_word[i];
        const int old_t = assignment[i];
        --n_topic[old_t];
        --tm.topic_word_counts[old_t][w];
        --doc_counts[old_t];
        double cum = 0.0;
        for (int t = 0; t < k; ++t) {
          cum += (static_cast<double>(doc_counts[t]) + tm.alpha) *
                 (static_cast<double>(tm.topic_word_counts[t][w]) + tm.beta) /
                 (static_cast<double>(n_topic[t]) + beta_total);
          weights[t] = cum;
        }
        const double u = uniform_unit(rng) * cum;
        int new_t = 0;
        while (new_t < k - 1 && weights[new_t] < u) ++new_t;
        assignment[i] = static_cast<std::int16_t>(new_t);
        ++n_topic[new_t];
        ++tm.topic_word_counts[new_t][w];
        ++doc_counts[new_t];
      }
    }
  }

  finalize_distributions(tm);
  return tm;
}

void write_topic_model(const TopicModel& tm, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  nlohmann::ordered_json meta;
  meta["k"] = tm.k;
  meta["seed"] = tm.seed;
  meta["alpha"] = tm.alpha;
  meta["beta"] = tm.beta;
  meta["sweeps"] = tm.sweeps;
  meta["vocabulary"] = tm.vocabulary;
  {
    std::ofstream out(dir / "model.json", std::ios::binary);
    out << meta.dump(2) << '\n';
  }

  const auto write_matrix = [&](const std::filesystem::path& path, std::string_view key,
                                auto cell, std::size_t rows, auto row_label) {
    std::ofstream out(path, std::ios::binary);
    out << key;
    for (int t = 0; t < tm.k; ++t) out << "\ttopic_" << t;
    out << '\n';
    for (std::size_t r = 0; r < rows; ++r) {
      out << row_label(r);
      for (int t = 0; t < tm.k; ++t) out << '\t' << cell(r, t);
      out << '\n';
    }
  };

  write_matrix(
      dir / "topic_word.tsv", "word",
      [&](std::size_t w, int t) { return format_number(tm.topic_word[t][w]); },
      tm.vocabulary.size(), [&](std::size_t w) { return tm.vocabulary[w]; });
  write_matrix(
      dir / "page_topic.tsv", "page_id",
      [&](std::size_t d, int t) { return format_number(tm.page_topic[d][t]); },
      tm.page_ids.size(), [&](std::size_t d) { return std::to_string(tm.page_ids[d]); });
  write_matrix(
      dir / "topic_word_counts.tsv", "word",
      [&](std::size_t w, int t) { return std::to_string(tm.topic_word_counts[t][w]); },
      tm.vocabulary.size(), [&](std::size_t w) { return tm.vocabulary[w]; });
  write_matrix(
      dir / "page_topic_counts.tsv", "page_id",
      [&](std::size_t d, int t) { return std::to_string(tm.page_topic_counts[d][t]); },
      tm.page_ids.size(), [&](std::size_t d) { return std::to_string(tm.page_ids[d]); });
}

namespace {

std::vector<std::string> split_tsv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

}  // namespace

TopicModel read_topic_model(const std::filesystem::path& dir) {
  std::ifstream meta_in(dir / "model.json", std::ios::binary);
  if (!meta_in) {
    throw ValidationError("topic model not found in '" + dir.string() + "'");
  }
  nlohmann::json meta;
  try {
    meta_in >> meta;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("invalid model.json: " + std::string(e.what()));
  }
  TopicModel tm;
  tm.k = meta.at("k").get<int>();
  tm.seed = meta.at("seed").get<std::uint64_t>();
  tm.alpha = meta.at("alpha").get<double>();
  tm.beta = meta.at("beta").get<double>();
  tm.sweeps = meta.at("sweeps").get<int>();
  tm.vocabulary = meta.at("vocabulary").get<std::vector<std::string>>();

  const auto read_counts = [&](const std::filesystem::path& path, std::size_t expected_rows,
                               bool rows_are_words) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("missing '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("empty '" + path.string() + "'");
    std::vector<std::vector<std::int64_t>> rows;
    std::vector<PageId> labels;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      const auto fields = split_tsv_line(line);
      if (fields.size() != static_cast<std::size_t>(tm.k) + 1) {
        throw ValidationError(path.string() + " line " + std::to_string(line_no) +
                              ": expected " + std::to_string(tm.k + 1) + " columns");
      }
      if (!rows_are_words) labels.push_back(static_cast<PageId>(std::stol(fields[0])));
      std::vector<std::int64_t> row(tm.k);
      for (int t = 0; t < tm.k; ++t) row[t] = std::stoll(fields[t + 1]);
      rows.push_back(std::move(row));
    }
    if (rows_are_words && rows.size() != expected_rows) {
      throw ValidationError(path.string() + ": row count does not match vocabulary");
    }
    return std::pair{std::move(rows), std::move(labels)};
  };

  auto [word_rows, word_labels] = read_counts(dir / "topic_word_counts.tsv", tm.vocabulary.size(),
                                         /*rows_are_words=*/true);
  (void)word_labels;
  tm.topic_word_counts.assign(tm.k, std::vector<std::int64_t>(tm.vocabulary.size(), 0));
  for (std::size_t w = 0; w < word_rows.size(); ++w) {
    for (int t = 0; t < tm.k; ++t) tm.topic_word_counts[t][w] = word_rows[w][t];
  }
  auto [page_rows, page_labels] =
      read_counts(dir / "page_topic_counts.tsv", 0, /*rows_are_words=*/false);
  tm.page_ids = std::move(page_labels);
  tm.page_topic_counts = std::move(page_rows);

  finalize_distributions(tm);
  return tm;
}

std::vector<std::string> representative_words(const TopicModel& tm, int topic, int count,
                                              bool filter_for_report) {
  if (topic < 0 || topic >= tm.k) throw ArgumentError("representative_words: bad topic id");
  if (count < 1) throw ArgumentError("representative_words: count must be >= 1");
  std::vector<std::size_t> order(tm.vocabulary.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (tm.topic_word[topic][a] != tm.topic_word[topic][b]) {
      return tm.topic_word[topic][a] > tm.topic_word[topic][b];
    }
    return tm.vocabulary[a] < tm.vocabulary[b];
  });
  std::vector<std::string> words;
  std::set<std::string> selected;
  for (std::size_t w : order) {
    if (static_cast<int>(words.size()) == count) break;
    const std::string& word = tm.vocabulary[w];
    if (filter_for_report) {
      if (word == "wikipedia") continue;
      if (datetime_stopwords().count(word)) continue;
      // Drop a plural whose singular already made the list.
      if (word.size() > 1 && word.back() == 's' && word != "wikipedias" &&
          selected.count(word.substr(0, word.size() - 1))) {
        continue;
      }
    }
    words.push_back(word);
    selected.insert(word);
  }
  return words;
}

double jsd(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ArgumentError("jsd: length mismatch");
  if (a.empty()) throw ArgumentError("jsd: empty distributions");
  double sum_a = 0.0, sum_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < 0.0 || b[i] < 0.0) throw ArgumentError("jsd: negative probability");
    sum_a += a[i];
    sum_b += b[i];
  }
  if (std::abs(sum_a - 1.0) > 1e-9 || std::abs(sum_b - 1.0) > 1e-9) {
    throw ArgumentError("jsd: inputs must sum to 1");
  }
  double divergence = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double m = a[i] + b[i];
    // One symmetric term per index, so jsd(a,b) == jsd(b,a) bitwise.
    double term = 0.0;
    if (a[i] > 0.0) term += a[i] * std::log2(2.0 * a[i] / m);
    if (b[i] > 0.0) term += b[i] * std::log2(2.0 * b[i] / m);
    divergence += 0.5 * term;
  }
  divergence = std::clamp(divergence, 0.0, 1.0);
  return std::sqrt(divergence);
}

CoherenceScore semantic_coherence(const Snapshot& s, const TopicModel& tm, PageId origin,
                                  int steps) {
  const InfluenceVector iv = influence(s, origin, steps);
  const std::vector<double>* origin_mix = tm.mixture_of(origin);
  if (origin_mix == nullptr) {
    throw ArgumentError("semantic coherence: page " + std::to_string(origin) +
                        " missing from the topic model");
  }
  std::vector<double> p, neg_dist;
  for (std::size_t i = 0; i < iv.page_ids.size(); ++i) {
    if (iv.page_ids[i] == origin) continue;
    const std::vector<double>* mix = tm.mixture_of(iv.page_ids[i]);
    if (mix == nullptr) {
      throw ArgumentError("semantic coherence: page " + std::to_string(iv.page_ids[i]) +
                          " missing from the topic model");
    }
    p.push_back(iv.probs[i]);
    neg_dist.push_back(-jsd(*origin_mix, *mix));
  }
  CoherenceScore score;
  score.page = origin;
  score.steps = steps;
  try {
    score.value = pearson(p, neg_dist);
  } catch (const ArgumentError&) {
    throw NumericError("semantic coherence undefined: influence support of page " +
                       std::to_string(origin) + " has fewer than 3 nodes");
  }
  return score;
}

std::vector<double> cluster_topic_profile(const TopicModel& tm, std::span<const PageId> cluster) {
  if (cluster.empty()) throw ArgumentError("cluster_topic_profile: empty cluster");
  std::vector<double> profile(tm.k, 0.0);
  for (PageId id : cluster) {
    const std::vector<double>* mix = tm.mixture_of(id);
    if (mix == nullptr) {
      throw ArgumentError("cluster_topic_profile: page " + std::to_string(id) +
                          " missing from the topic model");
    }
    for (int t = 0; t < tm.k; ++t) profile[t] += (*mix)[t];
  }
  for (double& v : profile) v /= static_cast<double>(cluster.size());
  return profile;
}

}  // namespace normnet
