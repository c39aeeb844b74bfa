#include "normnet/report.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "normnet/format.hpp"
#include "normnet/ingest.hpp"
#include "normnet/semantics.hpp"

namespace normnet {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string trim(std::string_view s) {
  std::size_t begin = 0, end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return std::string(s.substr(begin, end - begin));
}

long long parse_ll(const std::string& value, const std::string& key) {
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ValidationError("config key '" + key + "': not an integer: '" + value + "'");
  }
  return out;
}

double parse_double(const std::string& value, const std::string& key) {
  char* end = nullptr;
  const double out = std::strtod(value.c_str(), &end);
  if (end == nullptr || *end != '\0' || value.empty()) {
    throw ValidationError("config key '" + key + "': not a number: '" + value + "'");
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& value, const std::string& key) {
  std::vector<int> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(static_cast<int>(parse_ll(item, key)));
  }
  if (out.empty()) throw ValidationError("config key '" + key + "': empty list");
  return out;
}

std::string join_ints(const std::vector<int>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ",";
    out += std::to_string(values[i]);
  }
  return out;
}

struct Period {
  std::string label;
  Timestamp cutoff;
};

std::vector<Period> enumerate_periods(const Corpus& corpus, const std::string& cadence) {
  std::vector<Period> periods;
  if (corpus.pages.empty()) return periods;
  const Timestamp first = corpus.earliest_event();
  const Timestamp last = corpus.latest_event();
  if (cadence == "yearly") {
    for (int y = year_of(first); y <= year_of(last); ++y) {
      periods.push_back({std::to_string(y), year_start(y + 1)});
    }
  } else if (cadence == "monthly") {
    int y = year_of(first), m = month_of(first);
    const int ylast = year_of(last), mlast = month_of(last);
    while (y < ylast || (y == ylast && m <= mlast)) {
      const int ny = m == 12 ? y + 1 : y;
      const int nm = m == 12 ? 1 : m + 1;
      periods.push_back({format_month(y, m), month_start(ny, nm)});
      y = ny;
      m = nm;
    }
  } else {
    throw ArgumentError("unknown cadence '" + cadence + "' (expected yearly or monthly)");
  }
  return periods;
}

std::string opt_cell(const std::optional<double>& value) {
  return value ? format_number(*value) : std::string();
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  return out;
}

class Pipeline {
 public:
  explicit Pipeline(PipelineConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.out_dir.empty()) {
      throw ArgumentError("no output directory configured (set 'out' or pass --out)");
    }
    out_ = cfg_.out_dir;
  }

  void write_config_echo() {
    auto out = open_out(out_ / "config.tsv");
    out << "key\tvalue\n";
    for (const auto& [key, value] : cfg_.echo()) out << key << '\t' << value << '\n';
  }

  void run(const std::string& stage, AnalysisReport* report) {
    const auto wrap = [&](auto&& fn) {
      try {
        fn();
      } catch (const StageFailure&) {
        throw;
      } catch (const ValidationError& e) {
        throw StageFailure(stage, e.what(), true);
      } catch (const std::exception& e) {
        throw StageFailure(stage, e.what(), false);
      }
    };
    if (stage == "ingest") {
      wrap([&] { stage_ingest(report); });
    } else if (stage == "snapshot") {
      wrap([&] { stage_snapshot(report); });
    } else if (stage == "centrality") {
      wrap([&] { stage_centrality(report); });
    } else if (stage == "gini") {
      wrap([&] { stage_gini(report); });
    } else if (stage == "influence") {
      wrap([&] { stage_influence(report); });
    } else if (stage == "overlap-series") {
      wrap([&] { stage_overlap_series(report); });
    } else if (stage == "topics") {
      wrap([&] { stage_topics(report); });
    } else if (stage == "coherence") {
      wrap([&] { stage_coherence(report); });
    } else if (stage == "communities") {
      wrap([&] { stage_communities(report); });
    } else if (stage == "clustering") {
      wrap([&] { stage_clustering(report); });
    } else if (stage == "regress") {
      wrap([&] { stage_regress(report); });
    } else if (stage == "correlate") {
      wrap([&] { stage_correlate(report); });
    } else if (stage == "kappa") {
      wrap([&] { stage_kappa(report); });
    } else {
      throw ArgumentError("unknown stage '" + stage + "'");
    }
  }

  AnalysisReport run_all() {
    AnalysisReport report;
    report.version = std::string(kToolVersion);
    report.config_echo = cfg_.echo();
    write_config_echo();
    for (const std::string& stage : pipeline_stages()) run(stage, &report);

    // Figure-friendly corpus copy; token counts are not plotted.
    report.corpus = corpus();
    for (Page& p : report.corpus.pages) p.token_counts.clear();

    try {
      for (const std::string fig : {"fig1", "fig2", "fig3", "fig4", "fig5"}) {
        emit_figure_data(report, fig, out_ / "figures" / (fig + ".tsv"));
      }
      write_report_json(report);
    } catch (const ValidationError& e) {
      throw StageFailure("report", e.what(), true);
    } catch (const StageFailure&) {
      throw;
    } catch (const std::exception& e) {
      throw StageFailure("report", e.what(), false);
    }
    return report;
  }

 private:
  // ---- lazily shared state ------------------------------------------------

  const Corpus& corpus() {
    if (!corpus_) {
      const std::filesystem::path dir = out_ / "corpus";
      if (!std::filesystem::exists(dir / "pages.tsv")) {
        throw ValidationError("ingested corpus not found under '" + dir.string() +
                              "'; run the ingest stage first");
      }
      corpus_ = read_corpus(dir);
    }
    return *corpus_;
  }

  const std::vector<Period>& periods() {
    if (!periods_) periods_ = enumerate_periods(corpus(), cfg_.cadence);
    return *periods_;
  }

  const Snapshot& period_snapshot(std::size_t i) {
    snapshots_.resize(periods().size());
    if (!snapshots_[i]) snapshots_[i] = build_snapshot(corpus(), periods()[i].cutoff);
    return *snapshots_[i];
  }

  const Snapshot& final_snapshot() {
    if (!final_snapshot_) final_snapshot_ = build_snapshot(corpus(), kNoCutoff);
    return *final_snapshot_;
  }

  CentralityOptions ec_options() const {
    return {cfg_.epsilon, cfg_.ec_tol, cfg_.ec_max_iter};
  }

  const CentralityVector& period_ec(std::size_t i) {
    ec_.resize(periods().size());
    if (!ec_[i]) ec_[i] = eigenvector_centrality(period_snapshot(i), ec_options());
    return *ec_[i];
  }

  const CentralityVector& final_ec() {
    if (!final_ec_) final_ec_ = eigenvector_centrality(final_snapshot(), ec_options());
    return *final_ec_;
  }

  // Pages of the final snapshot ordered by descending centrality (ties by
  // id); the first `size` ids form the core set.
  const std::vector<std::size_t>& final_order() {
    if (!final_order_) {
      const CentralityVector& cv = final_ec();
      std::vector<std::size_t> order(cv.page_ids.size());
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (cv.scores[a] != cv.scores[b]) return cv.scores[a] > cv.scores[b];
        return cv.page_ids[a] < cv.page_ids[b];
      });
      final_order_ = std::move(order);
    }
    return *final_order_;
  }

  std::vector<PageId> core_set(int size) {
    const CentralityVector& cv = final_ec();
    const std::vector<std::size_t>& order = final_order();
    std::vector<PageId> ids;
    for (std::size_t i = 0; i < order.size() && static_cast<int>(ids.size()) < size; ++i) {
      ids.push_back(cv.page_ids[order[i]]);
    }
    return ids;
  }

  const TopicModel& topic_model() {
    if (!topic_model_) {
      const std::filesystem::path dir = out_ / "topics";
      if (!std::filesystem::exists(dir / "model.json")) {
        throw ValidationError("topic model not found under '" + dir.string() +
                              "'; run the topics stage first");
      }
      topic_model_ = read_topic_model(dir);
    }
    return *topic_model_;
  }

  // ---- stages -------------------------------------------------------------

  void stage_ingest(AnalysisReport*) {
    Corpus c;
    if (cfg_.corpus_format == "html") {
      c = ingest_html_directory(cfg_.corpus_path, FilterConfig::defaults());
    } else if (cfg_.corpus_format == "canonical") {
      c = read_corpus(cfg_.corpus_path);
    } else {
      throw ArgumentError("unknown corpus_format '" + cfg_.corpus_format + "'");
    }
    if (c.pages.empty()) throw ValidationError("corpus has no pages");
    write_corpus(c, out_ / "corpus");
    corpus_ = std::move(c);
  }

  PeriodRow snapshot_row(const std::string& label, const Snapshot& snap) {
    PeriodRow row;
    row.label = label;
    row.cutoff = snap.cutoff;
    row.n_nodes = snap.node_count();
    row.n_edges = snap.edge_count();
    if (snap.node_count() >= 2) row.density = density(snap);
    row.giant_size = giant_component(snap).size();
    return row;
  }

  void stage_snapshot(AnalysisReport* report) {
    auto out = open_out(out_ / "snapshots" / "summary.tsv");
    out << "label\tcutoff\tnodes\tedges\tdensity\tgiant_component\tgiant_fraction\n";
    const auto emit = [&](const PeriodRow& row) {
      out << row.label << '\t' << format_timestamp(row.cutoff) << '\t' << row.n_nodes << '\t'
          << row.n_edges << '\t' << opt_cell(row.density) << '\t' << row.giant_size << '\t'
          << (row.n_nodes > 0 ? format_number(static_cast<double>(row.giant_size) /
                                              static_cast<double>(row.n_nodes))
                              : std::string())
          << '\n';
    };
    if (report) report->periods.resize(periods().size());
    for (std::size_t i = 0; i < periods().size(); ++i) {
      PeriodRow row = snapshot_row(periods()[i].label, period_snapshot(i));
      emit(row);
      if (report) report->periods[i] = std::move(row);
    }
    PeriodRow final_row = snapshot_row("final", final_snapshot());
    emit(final_row);
    if (report) report->final_period = std::move(final_row);

    auto growth_out = open_out(out_ / "snapshots" / "growth.tsv");
    growth_out << "degree_cap\tn_node_years\tmean\tstd_error\n";
    std::vector<Snapshot> series;
    for (std::size_t i = 0; i < periods().size(); ++i) series.push_back(period_snapshot(i));
    for (int cap : cfg_.growth_degree_caps) {
      try {
        const GrowthRate g = in_degree_growth_rates(series, cap);
        growth_out << cap << '\t' << g.n_node_years << '\t' << format_number(g.mean) << '\t'
                   << format_number(g.std_error) << '\n';
        if (report) report->growth.emplace_back(cap, g);
      } catch (const NumericError&) {
        // no qualifying node-years at this cap: omit the row
      }
    }
  }

  void stage_centrality(AnalysisReport* report) {
    {
      auto out = open_out(out_ / "centrality" / "ec_series.tsv");
      out << "label\tpage_id\tscore\n";
      for (std::size_t i = 0; i < periods().size(); ++i) {
        const CentralityVector& cv = period_ec(i);
        for (std::size_t j = 0; j < cv.page_ids.size(); ++j) {
          out << periods()[i].label << '\t' << cv.page_ids[j] << '\t'
              << format_number(cv.scores[j]) << '\n';
        }
      }
    }
    const CentralityVector& cv = final_ec();
    {
      auto out = open_out(out_ / "centrality" / "ec_final.tsv");
      out << "rank\tpage_id\ttitle\tcategory\tscore\n";
      int rank = 1;
      for (std::size_t idx : final_order()) {
        const Page* page = corpus().find(cv.page_ids[idx]);
        out << rank++ << '\t' << cv.page_ids[idx] << '\t' << page->title << '\t'
            << to_string(page->category) << '\t' << format_number(cv.scores[idx]) << '\n';
      }
    }
    {
      auto out = open_out(out_ / "centrality" / "table1.tsv");
      out << "rank\ttitle\tcategory\tcreated_at\tscore\n";
      int rank = 1;
      for (std::size_t idx : final_order()) {
        if (rank > cfg_.core_set_size) break;
        const Page* page = corpus().find(cv.page_ids[idx]);
        out << rank++ << '\t' << page->title << '\t' << to_string(page->category) << '\t'
            << format_timestamp(page->created_at) << '\t' << format_number(cv.scores[idx])
            << '\n';
      }
    }
    {
      auto out = open_out(out_ / "centrality" / "breaks.tsv");
      out << "order\trank\tbreak_size\n";
      if (cv.page_ids.size() >= 2) {
        const auto breaks = detect_breaks(cv, cfg_.min_break_separation, cfg_.break_top_m);
        for (std::size_t i = 0; i < breaks.size(); ++i) {
          out << i + 1 << '\t' << breaks[i].rank << '\t' << format_number(breaks[i].size)
              << '\n';
        }
        if (report) report->breaks = breaks;
      }
    }
    {
      auto out = open_out(out_ / "centrality" / "persistence.tsv");
      out << "from_label\tto_label\tpearson_r\n";
      const auto emit = [&](const std::string& from, const std::string& to,
                            const CentralityVector& a, const CentralityVector& b) {
        try {
          const double r = centrality_persistence(a, b);
          out << from << '\t' << to << '\t' << format_number(r) << '\n';
          if (report) report->persistence.push_back({from, to, r});
        } catch (const Error&) {
          // undefined for degenerate early snapshots: omit the row
        }
      };
      for (std::size_t i = 0; i + 1 < periods().size(); ++i) {
        emit(periods()[i].label, periods()[i + 1].label, period_ec(i), period_ec(i + 1));
      }
      if (!periods().empty()) {
        emit(periods().front().label, "final", period_ec(0), cv);
      }
    }
    if (report) {
      int rank = 1;
      for (std::size_t idx : final_order()) {
        const Page* page = corpus().find(cv.page_ids[idx]);
        report->final_ranking.push_back({rank++, cv.page_ids[idx], page->title, page->category,
                                         page->created_at, cv.scores[idx]});
      }
    }
  }

  void stage_gini(AnalysisReport* report) {
    auto out = open_out(out_ / "centrality" / "gini.tsv");
    out << "label\tgini\n";
    for (std::size_t i = 0; i < periods().size(); ++i) {
      const CentralityVector& cv = period_ec(i);
      if (cv.scores.size() < 2) continue;
      const double g = gini(cv.scores);
      out << periods()[i].label << '\t' << format_number(g) << '\n';
      if (report) report->periods[i].gini = g;
    }
  }

  void stage_influence(AnalysisReport*) {
    auto out = open_out(out_ / "influence" / "influence_vectors.tsv");
    out << "origin_id\tpage_id\tprobability\n";
    for (PageId origin : core_set(cfg_.core_set_size)) {
      const InfluenceVector iv = influence(final_snapshot(), origin, cfg_.walk_steps);
      for (std::size_t i = 0; i < iv.page_ids.size(); ++i) {
        out << origin << '\t' << iv.page_ids[i] << '\t' << format_number(iv.probs[i]) << '\n';
      }
    }
  }

  void stage_overlap_series(AnalysisReport* report) {
    auto out = open_out(out_ / "influence" / "overlap_series.tsv");
    out << "label\tset_size\tn_present\tmean_overlap\n";
    for (std::size_t i = 0; i < periods().size(); ++i) {
      const Snapshot& snap = period_snapshot(i);
      for (const int size : {cfg_.core_set_size, cfg_.core_set_size_alt}) {
        const std::vector<PageId> core = core_set(size);
        std::size_t present = 0;
        for (PageId id : core) {
          if (snap.index_of(id)) ++present;
        }
        if (present < 2) continue;
        const double value = mean_pairwise_overlap(snap, core, cfg_.walk_steps);
        out << periods()[i].label << '\t' << size << '\t' << present << '\t'
            << format_number(value) << '\n';
        if (report) {
          PeriodRow& row = report->periods[i];
          if (size == cfg_.core_set_size) {
            row.mean_overlap_core = value;
            row.overlap_present_core = present;
          } else {
            row.mean_overlap_alt = value;
            row.overlap_present_alt = present;
          }
        }
      }
    }
  }

  void stage_topics(AnalysisReport* report) {
    std::vector<TokenDistribution> docs;
    docs.reserve(corpus().pages.size());
    for (const Page& p : corpus().pages) {
      TokenDistribution d;
      d.page = p.id;
      d.counts = p.token_counts;
      for (const auto& [word, count] : d.counts) d.total += count;
      docs.push_back(std::move(d));
    }
    LdaOptions opt;
    opt.topics = cfg_.lda_topics;
    opt.seed = cfg_.lda_seed;
    opt.sweeps = cfg_.lda_sweeps;
    opt.alpha = cfg_.lda_alpha;
    opt.beta = cfg_.lda_beta;
    topic_model_ = fit_lda(docs, opt);
    write_topic_model(*topic_model_, out_ / "topics");

    const std::vector<double> prevalence = topic_model_->topic_prevalence();
    std::vector<int> order(topic_model_->k);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (prevalence[a] != prevalence[b]) return prevalence[a] > prevalence[b];
      return a < b;
    });
    auto out = open_out(out_ / "topics" / "tableF1.tsv");
    out << "rank\ttopic\tprevalence\ttop_words\n";
    for (std::size_t i = 0; i < order.size(); ++i) {
      const auto words = representative_words(*topic_model_, order[i], 20);
      std::string joined;
      for (std::size_t w = 0; w < words.size(); ++w) {
        if (w > 0) joined += ", ";
        joined += words[w];
      }
      out << i + 1 << '\t' << order[i] << '\t' << format_number(prevalence[order[i]]) << '\t'
          << joined << '\n';
      if (report) report->topics.push_back({order[i], prevalence[order[i]], words});
    }
  }

  void stage_coherence(AnalysisReport* report) {
    const TopicModel& tm = topic_model();
    auto out = open_out(out_ / "semantics" / "coherence_series.tsv");
    out << "label\tset_size\tn_defined\tmean_coherence\n";
    for (std::size_t i = 0; i < periods().size(); ++i) {
      const Snapshot& snap = period_snapshot(i);
      for (const int size : {cfg_.core_set_size, cfg_.core_set_size_alt}) {
        double sum = 0.0;
        std::size_t defined = 0;
        for (PageId id : core_set(size)) {
          if (!snap.index_of(id)) continue;
          try {
            sum += semantic_coherence(snap, tm, id, cfg_.walk_steps).value;
            ++defined;
          } catch (const NumericError&) {
            // degenerate influence support for this page in this period
          }
        }
        if (defined == 0) continue;
        const double value = sum / static_cast<double>(defined);
        out << periods()[i].label << '\t' << size << '\t' << defined << '\t'
            << format_number(value) << '\n';
        if (report) {
          PeriodRow& row = report->periods[i];
          if (size == cfg_.core_set_size) {
            row.mean_coherence_core = value;
            row.coherence_defined_core = defined;
          } else {
            row.mean_coherence_alt = value;
            row.coherence_defined_alt = defined;
          }
        }
      }
    }
  }

  void stage_communities(AnalysisReport* report) {
    const Snapshot& fin = final_snapshot();
    Snapshot scoped;
    if (cfg_.louvain_scope == "giant") {
      scoped = induced_subgraph(fin, giant_component(fin));
    } else if (cfg_.louvain_scope == "full") {
      scoped = fin;
    } else {
      throw ArgumentError("unknown louvain_scope '" + cfg_.louvain_scope + "'");
    }
    const Partition part = louvain(scoped, cfg_.louvain_seed);
    const CentralityVector scoped_ec = eigenvector_centrality(scoped, ec_options());
    const auto summaries =
        summarize_clusters(part, scoped_ec, topic_model(), corpus(), cfg_.summary_top_k);

    {
      auto out = open_out(out_ / "communities" / "partition.tsv");
      out << "page_id\tcluster_id\n";
      for (std::size_t i = 0; i < part.page_ids.size(); ++i) {
        out << part.page_ids[i] << '\t' << part.clusters[i] << '\n';
      }
    }
    std::vector<std::vector<std::string>> top_titles;
    for (const ClusterSummary& cs : summaries) {
      std::vector<std::string> titles;
      for (PageId id : cs.top_pages) titles.push_back(corpus().find(id)->title);
      top_titles.push_back(std::move(titles));
    }
    {
      ordered_json j;
      j["scope"] = cfg_.louvain_scope;
      j["seed"] = cfg_.louvain_seed;
      j["modularity"] = round12(part.modularity);
      j["n_clusters"] = part.n_clusters;
      ordered_json clusters = ordered_json::array();
      for (std::size_t c = 0; c < summaries.size(); ++c) {
        const ClusterSummary& cs = summaries[c];
        ordered_json jc;
        jc["cluster"] = cs.cluster;
        jc["size"] = cs.size;
        jc["fraction"] = round12(cs.size_fraction);
        jc["dominant_topic"] = cs.dominant_topic;
        jc["norm_class"] =
            cs.norm_class ? std::string(to_string(*cs.norm_class)) : std::string();
        jc["top_pages"] = top_titles[c];
        clusters.push_back(std::move(jc));
      }
      j["clusters"] = std::move(clusters);
      auto out = open_out(out_ / "communities" / "summary.json");
      out << j.dump(2) << '\n';
    }
    {
      auto out = open_out(out_ / "communities" / "table2.tsv");
      out << "rank\tsize\tfraction\tnorm_class\tdominant_topic\n";
      for (std::size_t c = 0; c < summaries.size(); ++c) {
        const ClusterSummary& cs = summaries[c];
        out << c + 1 << '\t' << cs.size << '\t' << format_number(cs.size_fraction) << '\t'
            << (cs.norm_class ? std::string(to_string(*cs.norm_class)) : std::string()) << '\t'
            << cs.dominant_topic << '\n';
      }
    }
    {
      auto out = open_out(out_ / "communities" / "tableF2.tsv");
      out << "rank\ttop_pages\n";
      for (std::size_t c = 0; c < summaries.size(); ++c) {
        std::string joined;
        for (std::size_t t = 0; t < top_titles[c].size(); ++t) {
          if (t > 0) joined += "; ";
          joined += top_titles[c][t];
        }
        out << c + 1 << '\t' << joined << '\n';
      }
    }

    // Cluster-level out-link fractions (self-loops omitted).
    std::vector<ClusterEdge> cluster_edges;
    {
      std::map<std::pair<std::int32_t, std::int32_t>, std::size_t> counts;
      std::vector<std::size_t> out_total(part.n_clusters, 0);
      for (const auto& [src, dst] : scoped.edges) {
        const auto u = static_cast<std::size_t>(*scoped.index_of(src));
        const auto v = static_cast<std::size_t>(*scoped.index_of(dst));
        const std::int32_t cu = part.clusters[u];
        const std::int32_t cv2 = part.clusters[v];
        ++out_total[cu];
        if (cu != cv2) ++counts[{cu, cv2}];
      }
      auto out = open_out(out_ / "communities" / "cluster_edges.tsv");
      out << "src_cluster\tdst_cluster\tweight\n";
      for (const auto& [key, count] : counts) {
        const double weight =
            static_cast<double>(count) / static_cast<double>(out_total[key.first]);
        out << key.first << '\t' << key.second << '\t' << format_number(weight) << '\n';
        cluster_edges.push_back({key.first, key.second, weight});
      }
    }

    if (report) {
      report->partition = part;
      report->clusters = summaries;
      report->cluster_top_titles = std::move(top_titles);
      report->cluster_edges = std::move(cluster_edges);
    }
  }

  void stage_clustering(AnalysisReport* report) {
    auto out = open_out(out_ / "communities" / "clustering_series.tsv");
    out << "label\taverage\tsum\n";
    for (std::size_t i = 0; i < periods().size(); ++i) {
      const LocalClustering lc = local_clustering(period_snapshot(i));
      out << periods()[i].label << '\t' << format_number(lc.average) << '\t'
          << format_number(lc.sum) << '\n';
      if (report) {
        report->periods[i].clustering_average = lc.average;
        report->periods[i].clustering_sum = lc.sum;
      }
    }
    const LocalClustering lc = local_clustering(final_snapshot());
    out << "final\t" << format_number(lc.average) << '\t' << format_number(lc.sum) << '\n';
    if (report) {
      report->final_period.clustering_average = lc.average;
      report->final_period.clustering_sum = lc.sum;
    }
  }

  static const std::vector<std::string>& predictor_names() {
    static const std::vector<std::string> kNames = {"age", "edits", "talk_edits", "editors",
                                                    "size"};
    return kNames;
  }

  // Attention predictors for the final snapshot's nodes, in
  // predictor_names() order.
  std::vector<std::vector<double>> predictor_columns() {
    const Snapshot& fin = final_snapshot();
    const Timestamp reference = corpus().latest_event();
    std::vector<std::vector<double>> cols(5);
    for (PageId id : fin.nodes) {
      const Page* p = corpus().find(id);
      cols[0].push_back(static_cast<double>(reference - p->created_at) / 86400.0);
      cols[1].push_back(static_cast<double>(p->n_edits));
      cols[2].push_back(static_cast<double>(p->n_talk_edits));
      cols[3].push_back(static_cast<double>(p->n_editors));
      cols[4].push_back(static_cast<double>(p->page_size_bytes));
    }
    return cols;
  }

  void stage_regress(AnalysisReport* report) {
    const CentralityVector& cv = final_ec();
    const auto z = zscore(predictor_columns(), predictor_names());
    const RegressionResult reg = ols(z, cv.scores);
    const ModelComparison cmp = compare_models(z, cv.scores);
    {
      auto out = open_out(out_ / "stats" / "tableC1.tsv");
      out << "predictor\tcoefficient\tstd_error\tp_value\n";
      out << "intercept\t" << format_number(reg.intercept) << '\t'
          << format_number(reg.intercept_std_error) << '\t'
          << format_number(reg.intercept_p_value) << '\n';
      for (std::size_t j = 0; j < predictor_names().size(); ++j) {
        out << predictor_names()[j] << '\t' << format_number(reg.coefficients[j]) << '\t'
            << format_number(reg.std_errors[j]) << '\t' << format_number(reg.p_values[j])
            << '\n';
      }
    }
    {
      ordered_json j;
      j["target"] = "eigenvector_centrality";
      j["n_rows"] = cv.scores.size();
      j["r_squared"] = round12(reg.r_squared);
      j["mse"] = round12(reg.mse);
      j["linear_mse"] = cmp.linear ? ordered_json(round12(cmp.linear->mse)) : ordered_json();
      j["logistic_mse"] =
          cmp.logistic ? ordered_json(round12(cmp.logistic->mse)) : ordered_json();
      j["winner"] = !cmp.winner                         ? ""
                    : *cmp.winner == ModelForm::linear ? "linear"
                                                        : "logistic_curve";
      j["linear_error"] = cmp.linear_error;
      j["logistic_error"] = cmp.logistic_error;
      auto out = open_out(out_ / "stats" / "regression.json");
      out << j.dump(2) << '\n';
    }
    if (report) {
      report->regression = reg;
      report->model_comparison = cmp;
    }
  }

  void stage_correlate(AnalysisReport* report) {
    const CentralityVector& cv = final_ec();
    const auto cols = predictor_columns();
    const std::vector<std::pair<std::string, const std::vector<double>*>> measures = {
        {"views", nullptr},  // filled below: views need their own column
        {"edits", &cols[1]},
        {"talk_edits", &cols[2]},
        {"editors", &cols[3]},
    };
    std::vector<double> views;
    for (PageId id : final_snapshot().nodes) {
      views.push_back(static_cast<double>(corpus().find(id)->page_views));
    }
    auto out = open_out(out_ / "stats" / "tableB1.tsv");
    out << "measure\tr\tp_value\n";
    for (const auto& [name, column] : measures) {
      const std::vector<double>& x = column ? *column : views;
      try {
        const double r = pearson(x, cv.scores);
        const double p = pearson_p_value(r, x.size());
        out << name << '\t' << format_number(r) << '\t' << format_number(p) << '\n';
        if (report) report->correlations.push_back({name, r, p});
      } catch (const Error&) {
        // zero-variance measure on this corpus: omit the row
      }
    }

    // Power-law fit of pageview share against centrality.
    double total_views = 0.0;
    for (double v : views) total_views += v;
    std::vector<double> x, y;
    for (std::size_t i = 0; i < views.size(); ++i) {
      if (views[i] > 0.0 && cv.scores[i] > 0.0) {
        x.push_back(cv.scores[i]);
        y.push_back(views[i] / total_views);
      }
    }
    auto plout = open_out(out_ / "stats" / "powerlaw.tsv");
    plout << "n_points\talpha\tstd_error\n";
    if (x.size() >= 3) {
      try {
        const PowerLawFit fit = powerlaw_fit(x, y);
        plout << x.size() << '\t' << format_number(fit.alpha) << '\t'
              << format_number(fit.std_error) << '\n';
        if (report) report->powerlaw = fit;
      } catch (const Error&) {
        // degenerate inputs: leave only the header
      }
    }
  }

  void stage_kappa(AnalysisReport* report) {
    if (cfg_.rater_labels_path.empty()) return;  // stage disabled
    const RaterLabels labels = read_rater_labels(cfg_.rater_labels_path);
    const AgreementResult res = cohens_kappa(labels.rater_a, labels.rater_b);
    auto out = open_out(out_ / "stats" / "kappa.tsv");
    out << "n_items\tn_categories\tagreement\tkappa\n";
    out << res.n_items << '\t' << res.n_categories << '\t' << format_number(res.agreement)
        << '\t' << format_number(res.kappa) << '\n';
    if (report) report->kappa = res;
  }

  void write_report_json(const AnalysisReport& report) {
    ordered_json j;
    j["tool"] = "normnet";
    j["version"] = report.version;
    ordered_json cfg = ordered_json::object();
    for (const auto& [key, value] : report.config_echo) cfg[key] = value;
    j["config"] = std::move(cfg);

    const auto period_json = [](const PeriodRow& row) {
      ordered_json p;
      p["label"] = row.label;
      p["cutoff"] = format_timestamp(row.cutoff);
      p["nodes"] = row.n_nodes;
      p["edges"] = row.n_edges;
      if (row.density) p["density"] = round12(*row.density);
      p["giant_component"] = row.giant_size;
      if (row.gini) p["gini"] = round12(*row.gini);
      if (row.mean_overlap_core) {
        p["mean_overlap_core"] = round12(*row.mean_overlap_core);
        p["overlap_present_core"] = row.overlap_present_core;
      }
      if (row.mean_overlap_alt) {
        p["mean_overlap_alt"] = round12(*row.mean_overlap_alt);
        p["overlap_present_alt"] = row.overlap_present_alt;
      }
      if (row.mean_coherence_core) {
        p["mean_coherence_core"] = round12(*row.mean_coherence_core);
        p["coherence_defined_core"] = row.coherence_defined_core;
      }
      if (row.mean_coherence_alt) {
        p["mean_coherence_alt"] = round12(*row.mean_coherence_alt);
        p["coherence_defined_alt"] = row.coherence_defined_alt;
      }
      p["clustering_average"] = round12(row.clustering_average);
      p["clustering_sum"] = round12(row.clustering_sum);
      return p;
    };
    ordered_json periods_json = ordered_json::array();
    for (const PeriodRow& row : report.periods) periods_json.push_back(period_json(row));
    j["periods"] = std::move(periods_json);
    j["final"] = period_json(report.final_period);

    ordered_json ranking = ordered_json::array();
    for (const RankedPage& r : report.final_ranking) {
      if (r.rank > cfg_.core_set_size) break;
      ordered_json jr;
      jr["rank"] = r.rank;
      jr["title"] = r.title;
      jr["category"] = std::string(to_string(r.category));
      jr["created_at"] = format_timestamp(r.created_at);
      jr["score"] = round12(r.score);
      ranking.push_back(std::move(jr));
    }
    j["core_norms"] = std::move(ranking);

    ordered_json breaks = ordered_json::array();
    for (const BreakPoint& b : report.breaks) {
      breaks.push_back(ordered_json{{"rank", b.rank}, {"size", round12(b.size)}});
    }
    j["breaks"] = std::move(breaks);

    ordered_json persistence = ordered_json::array();
    for (const PersistenceRow& row : report.persistence) {
      persistence.push_back(ordered_json{
          {"from", row.from_label}, {"to", row.to_label}, {"r", round12(row.r)}});
    }
    j["persistence"] = std::move(persistence);

    ordered_json growth = ordered_json::array();
    for (const auto& [cap, rate] : report.growth) {
      growth.push_back(ordered_json{{"degree_cap", cap},
                                    {"n_node_years", rate.n_node_years},
                                    {"mean", round12(rate.mean)},
                                    {"std_error", round12(rate.std_error)}});
    }
    j["in_degree_growth"] = std::move(growth);

    ordered_json communities;
    communities["modularity"] = round12(report.partition.modularity);
    communities["n_clusters"] = report.partition.n_clusters;
    ordered_json clusters = ordered_json::array();
    for (std::size_t c = 0; c < report.clusters.size(); ++c) {
      const ClusterSummary& cs = report.clusters[c];
      ordered_json jc;
      jc["cluster"] = cs.cluster;
      jc["size"] = cs.size;
      jc["fraction"] = round12(cs.size_fraction);
      jc["dominant_topic"] = cs.dominant_topic;
      jc["norm_class"] = cs.norm_class ? std::string(to_string(*cs.norm_class)) : std::string();
      jc["top_pages"] = report.cluster_top_titles[c];
      clusters.push_back(std::move(jc));
    }
    communities["clusters"] = std::move(clusters);
    j["communities"] = std::move(communities);

    ordered_json topics = ordered_json::array();
    for (const TopicSummary& t : report.topics) {
      topics.push_back(ordered_json{{"topic", t.topic},
                                    {"prevalence", round12(t.prevalence)},
                                    {"top_words", t.top_words}});
    }
    j["topics"] = std::move(topics);

    if (report.regression) {
      const RegressionResult& reg = *report.regression;
      ordered_json jr;
      jr["r_squared"] = round12(reg.r_squared);
      jr["mse"] = round12(reg.mse);
      ordered_json coeffs = ordered_json::array();
      for (std::size_t i = 0; i < predictor_names().size(); ++i) {
        coeffs.push_back(ordered_json{{"predictor", predictor_names()[i]},
                                      {"coefficient", round12(reg.coefficients[i])},
                                      {"std_error", round12(reg.std_errors[i])},
                                      {"p_value", round12(reg.p_values[i])}});
      }
      jr["coefficients"] = std::move(coeffs);
      if (report.model_comparison && report.model_comparison->winner) {
        jr["preferred_model"] = *report.model_comparison->winner == ModelForm::linear
                                    ? "linear"
                                    : "logistic_curve";
      }
      j["regression"] = std::move(jr);
    }

    ordered_json correlations = ordered_json::array();
    for (const CorrelationRow& row : report.correlations) {
      correlations.push_back(ordered_json{
          {"measure", row.measure}, {"r", round12(row.r)}, {"p_value", round12(row.p_value)}});
    }
    j["correlations"] = std::move(correlations);

    if (report.powerlaw) {
      j["powerlaw"] = ordered_json{{"alpha", round12(report.powerlaw->alpha)},
                                   {"std_error", round12(report.powerlaw->std_error)}};
    }
    if (report.kappa) {
      j["kappa"] = ordered_json{{"n_items", report.kappa->n_items},
                                {"n_categories", report.kappa->n_categories},
                                {"agreement", round12(report.kappa->agreement)},
                                {"kappa", round12(report.kappa->kappa)}};
    }

    auto out = open_out(out_ / "report.json");
    out << j.dump(2) << '\n';
  }

  PipelineConfig cfg_;
  std::filesystem::path out_;
  std::optional<Corpus> corpus_;
  std::optional<std::vector<Period>> periods_;
  std::vector<std::optional<Snapshot>> snapshots_;
  std::optional<Snapshot> final_snapshot_;
  std::vector<std::optional<CentralityVector>> ec_;
  std::optional<CentralityVector> final_ec_;
  std::optional<std::vector<std::size_t>> final_order_;
  std::optional<TopicModel> topic_model_;
};

}  // namespace

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open config file '" + path.string() + "'");
  PipelineConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ValidationError(path.string() + " line " + std::to_string(line_no) +
                            ": expected key = value");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key == "corpus") {
      cfg.corpus_path = value;
    } else if (key == "corpus_format") {
      cfg.corpus_format = value;
    } else if (key == "out") {
      cfg.out_dir = value;
    } else if (key == "cadence") {
      cfg.cadence = value;
    } else if (key == "epsilon") {
      cfg.epsilon = parse_double(value, key);
    } else if (key == "ec_tol") {
      cfg.ec_tol = parse_double(value, key);
    } else if (key == "ec_max_iter") {
      cfg.ec_max_iter = static_cast<int>(parse_ll(value, key));
    } else if (key == "walk_steps") {
      cfg.walk_steps = static_cast<int>(parse_ll(value, key));
    } else if (key == "core_set_size") {
      cfg.core_set_size = static_cast<int>(parse_ll(value, key));
    } else if (key == "core_set_size_alt") {
      cfg.core_set_size_alt = static_cast<int>(parse_ll(value, key));
    } else if (key == "lda_topics") {
      cfg.lda_topics = static_cast<int>(parse_ll(value, key));
    } else if (key == "lda_seed") {
      cfg.lda_seed = static_cast<std::uint64_t>(parse_ll(value, key));
    } else if (key == "lda_sweeps") {
      cfg.lda_sweeps = static_cast<int>(parse_ll(value, key));
    } else if (key == "lda_alpha") {
      cfg.lda_alpha = parse_double(value, key);
    } else if (key == "lda_beta") {
      cfg.lda_beta = parse_double(value, key);
    } else if (key == "louvain_seed") {
      cfg.louvain_seed = static_cast<std::uint64_t>(parse_ll(value, key));
    } else if (key == "louvain_scope") {
      cfg.louvain_scope = value;
    } else if (key == "min_break_separation") {
      cfg.min_break_separation = static_cast<int>(parse_ll(value, key));
    } else if (key == "break_top_m") {
      cfg.break_top_m = static_cast<int>(parse_ll(value, key));
    } else if (key == "growth_degree_caps") {
      cfg.growth_degree_caps = parse_int_list(value, key);
    } else if (key == "summary_top_k") {
      cfg.summary_top_k = static_cast<int>(parse_ll(value, key));
    } else if (key == "rater_labels") {
      cfg.rater_labels_path = value;
    } else {
      throw ValidationError(path.string() + " line " + std::to_string(line_no) +
                            ": unknown config key '" + key + "'");
    }
  }
  return cfg;
}

std::vector<std::pair<std::string, std::string>> PipelineConfig::echo() const {
  const double effective_alpha =
      lda_alpha < 0.0 ? 50.0 / static_cast<double>(lda_topics) : lda_alpha;
  return {
      {"tool_version", std::string(kToolVersion)},
      {"corpus", corpus_path},
      {"corpus_format", corpus_format},
      {"cadence", cadence},
      {"epsilon", format_number(epsilon)},
      {"ec_tol", format_number(ec_tol)},
      {"ec_max_iter", std::to_string(ec_max_iter)},
      {"walk_steps", std::to_string(walk_steps)},
      {"core_set_size", std::to_string(core_set_size)},
      {"core_set_size_alt", std::to_string(core_set_size_alt)},
      {"lda_topics", std::to_string(lda_topics)},
      {"lda_seed", std::to_string(lda_seed)},
      {"lda_sweeps", std::to_string(lda_sweeps)},
      {"lda_alpha", format_number(effective_alpha)},
      {"lda_beta", format_number(lda_beta)},
      {"louvain_seed", std::to_string(louvain_seed)},
      {"louvain_scope", louvain_scope},
      {"min_break_separation", std::to_string(min_break_separation)},
      {"break_top_m", std::to_string(break_top_m)},
      {"growth_degree_caps", join_ints(growth_degree_caps)},
      {"summary_top_k", std::to_string(summary_top_k)},
      {"rater_labels", rater_labels_path},
  };
}

const std::vector<std::string>& pipeline_stages() {
  static const std::vector<std::string> kStages = {
      "ingest",  "snapshot",  "centrality",  "gini",       "influence",
      "overlap-series", "topics", "coherence", "communities", "clustering",
      "regress", "correlate", "kappa"};
  return kStages;
}

void run_stage(const PipelineConfig& cfg, const std::string& stage) {
  Pipeline pipeline(cfg);
  pipeline.write_config_echo();
  pipeline.run(stage, nullptr);
}

AnalysisReport run_pipeline(const PipelineConfig& cfg) {
  Pipeline pipeline(cfg);
  return pipeline.run_all();
}

void emit_figure_data(const AnalysisReport& report, const std::string& figure_id,
                      const std::filesystem::path& out_file) {
  auto out = open_out(out_file);
  if (figure_id == "fig1") {
    out << "month\tcumulative_policy_pages\tcumulative_non_policy_pages\tactive_users\n";
    if (report.corpus.pages.empty()) return;
    std::map<std::pair<int, int>, std::int64_t> population;
    for (const MonthlyActiveUsers& m : report.corpus.population) {
      population[{m.year, m.month}] = m.active_users;
    }
    const Timestamp first = report.corpus.earliest_event();
    int y = year_of(first), m = month_of(first);
    int ylast = year_of(report.corpus.latest_event());
    int mlast = month_of(report.corpus.latest_event());
    if (!population.empty()) {
      const auto [py, pm] = population.rbegin()->first;
      if (std::pair{py, pm} > std::pair{ylast, mlast}) {
        ylast = py;
        mlast = pm;
      }
    }
    while (y < ylast || (y == ylast && m <= mlast)) {
      const int ny = m == 12 ? y + 1 : y;
      const int nm = m == 12 ? 1 : m + 1;
      const Timestamp cut = month_start(ny, nm);
      std::size_t policy = 0, non_policy = 0;
      for (const Page& p : report.corpus.pages) {
        if (p.created_at >= cut) continue;
        if (p.category == PageCategory::policy || p.category == PageCategory::guideline) {
          ++policy;
        } else {
          ++non_policy;
        }
      }
      const auto pop = population.find({y, m});
      out << format_month(y, m) << '\t' << policy << '\t' << non_policy << '\t'
          << (pop == population.end() ? std::string() : std::to_string(pop->second)) << '\n';
      y = ny;
      m = nm;
    }
  } else if (figure_id == "fig2") {
    out << "label\tgini\n";
    for (const PeriodRow& row : report.periods) {
      out << row.label << '\t' << opt_cell(row.gini) << '\n';
    }
  } else if (figure_id == "fig3") {
    out << "rank\tpage_id\ttitle\tcategory\tscore\n";
    for (const RankedPage& r : report.final_ranking) {
      out << r.rank << '\t' << r.id << '\t' << r.title << '\t' << to_string(r.category) << '\t'
          << format_number(r.score) << '\n';
    }
  } else if (figure_id == "fig4") {
    out << "label\tmean_overlap\tmean_coherence\n";
    for (const PeriodRow& row : report.periods) {
      out << row.label << '\t' << opt_cell(row.mean_overlap_core) << '\t'
          << opt_cell(row.mean_coherence_core) << '\n';
    }
  } else if (figure_id == "fig5") {
    out << "src_cluster\tdst_cluster\tweight\n";
    for (const ClusterEdge& e : report.cluster_edges) {
      out << e.src << '\t' << e.dst << '\t' << format_number(e.weight) << '\n';
    }
  } else {
    throw ArgumentError("unknown figure id '" + figure_id + "'");
  }
}

}  // namespace normnet
