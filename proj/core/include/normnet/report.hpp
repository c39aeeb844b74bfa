#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "normnet/centrality.hpp"
#include "normnet/community.hpp"
#include "normnet/corpus.hpp"
#include "normnet/error.hpp"
#include "normnet/influence.hpp"
#include "normnet/snapshot.hpp"
#include "normnet/stats.hpp"

namespace normnet {

inline constexpr std::string_view kToolVersion = "0.1.0";

// Flat key=value configuration; defaults follow the reference parameters
// (epsilon 0.15, 5 walk steps, 20 core norms, 20 topics).
struct PipelineConfig {
  std::string corpus_path;
  std::string corpus_format = "canonical";  // canonical | html
  std::string out_dir;
  std::string cadence = "yearly";  // yearly | monthly
  double epsilon = 0.15;
  double ec_tol = 1e-12;
  int ec_max_iter = 10000;
  int walk_steps = 5;
  int core_set_size = 20;
  int core_set_size_alt = 10;
  int lda_topics = 20;
  std::uint64_t lda_seed = 0;
  int lda_sweeps = 2000;
  double lda_alpha = -1.0;  // negative: 50 / lda_topics
  double lda_beta = 0.01;
  std::uint64_t louvain_seed = 0;
  std::string louvain_scope = "giant";  // giant | full
  int min_break_separation = 5;
  int break_top_m = 5;
  std::vector<int> growth_degree_caps = {10, 100};
  int summary_top_k = 10;
  std::string rater_labels_path;  // optional: enables the kappa stage

  static PipelineConfig load(const std::filesystem::path& path);
  // Every effective setting, in a fixed order, as serialized into reports.
  std::vector<std::pair<std::string, std::string>> echo() const;
};

// Pipeline stages in execution order. Each is also a CLI subcommand and can
// be run individually over the same output directory.
const std::vector<std::string>& pipeline_stages();

// An error wrapped with the stage that raised it.
struct StageFailure : Error {
  StageFailure(const std::string& stage_name, const std::string& message, bool validation)
      : Error("stage " + stage_name + ": " + message),
        stage(stage_name),
        is_validation(validation) {}
  std::string stage;
  bool is_validation;
};

struct PeriodRow {
  std::string label;  // "2004" (yearly), "2004-07" (monthly), "final"
  Timestamp cutoff = 0;
  std::size_t n_nodes = 0;
  std::size_t n_edges = 0;
  std::optional<double> density;
  std::size_t giant_size = 0;
  std::optional<double> gini;
  std::optional<double> mean_overlap_core;  // core_set_size set
  std::size_t overlap_present_core = 0;
  std::optional<double> mean_overlap_alt;  // core_set_size_alt set
  std::size_t overlap_present_alt = 0;
  std::optional<double> mean_coherence_core;
  std::size_t coherence_defined_core = 0;
  std::optional<double> mean_coherence_alt;
  std::size_t coherence_defined_alt = 0;
  double clustering_average = 0.0;
  double clustering_sum = 0.0;
};

struct RankedPage {
  int rank = 0;
  PageId id = -1;
  std::string title;
  PageCategory category = PageCategory::other;
  Timestamp created_at = 0;
  double score = 0.0;
};

struct TopicSummary {
  int topic = -1;
  double prevalence = 0.0;
  std::vector<std::string> top_words;
};

struct ClusterEdge {
  std::int32_t src = 0;
  std::int32_t dst = 0;
  double weight = 0.0;  // fraction of the origin cluster's out-links
};

struct PersistenceRow {
  std::string from_label;
  std::string to_label;
  double r = 0.0;
};

struct CorrelationRow {
  std::string measure;
  double r = 0.0;
  double p_value = 1.0;
};

struct AnalysisReport {
  std::vector<std::pair<std::string, std::string>> config_echo;
  std::string version;
  Corpus corpus;
  std::vector<PeriodRow> periods;            // excludes the final row
  PeriodRow final_period;
  std::vector<RankedPage> final_ranking;     // all pages, by final centrality
  std::vector<BreakPoint> breaks;
  std::vector<PersistenceRow> persistence;
  std::vector<std::pair<int, GrowthRate>> growth;  // per degree cap
  Partition partition;                       // final snapshot, configured scope
  std::vector<ClusterSummary> clusters;
  std::vector<std::vector<std::string>> cluster_top_titles;  // parallel to clusters
  std::vector<ClusterEdge> cluster_edges;
  std::vector<TopicSummary> topics;          // ordered by prevalence
  std::optional<RegressionResult> regression;
  std::optional<ModelComparison> model_comparison;
  std::vector<CorrelationRow> correlations;
  std::optional<PowerLawFit> powerlaw;
  std::optional<AgreementResult> kappa;
};

// Runs a single stage against cfg.out_dir, reading whatever earlier-stage
// artifacts it needs from there. Unknown stage -> ArgumentError; missing
// prerequisite artifacts -> StageFailure wrapping a ValidationError.
void run_stage(const PipelineConfig& cfg, const std::string& stage);

// Runs every stage in order, then writes the figure files and report.json.
// Identical config + corpus produce a byte-identical output tree.
AnalysisReport run_pipeline(const PipelineConfig& cfg);

// One figure's plotted series as a TSV file. Known ids: fig1 (population
// and cumulative page counts by month), fig2 (inequality over time), fig3
// (ranked centrality by category), fig4 (overlap and coherence series),
// fig5 (cluster graph edge list). Unknown id -> ArgumentError.
void emit_figure_data(const AnalysisReport& report, const std::string& figure_id,
                      const std::filesystem::path& out_file);

}  // namespace normnet
