// normnet: temporal analysis of norm-page link networks.
//
// Usage: normnet <subcommand> --config <file> [--out <dir>]
// Subcommands are the pipeline stages (ingest, snapshot, centrality, gini,
// influence, overlap-series, topics, coherence, communities, clustering,
// regress, correlate, kappa) plus `report`, which runs the whole pipeline
// and writes the figure files and report.json.
//
// Exit codes: 0 ok, 1 internal error, 2 input validation failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "normnet/report.hpp"

namespace {

void write_error_report(const std::string& out_dir, const std::string& stage,
                        const std::string& message) {
  if (out_dir.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) return;
  nlohmann::ordered_json j;
  j["stage"] = stage;
  j["error"] = message;
  std::ofstream out(std::filesystem::path(out_dir) / "error.json", std::ios::binary);
  if (out) out << j.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"normnet: temporal analysis of norm-page link networks"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;

  std::vector<std::string> subcommands = normnet::pipeline_stages();
  subcommands.push_back("report");
  for (const std::string& name : subcommands) {
    CLI::App* sub = app.add_subcommand(
        name, name == "report" ? "run the full pipeline and emit all reports"
                               : "run the " + name + " stage");
    sub->add_option("--config", config_path, "pipeline configuration file")->required();
    sub->add_option("--out", out_override, "output directory (overrides the config)");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string stage = app.get_subcommands().front()->get_name();

  std::string out_dir;
  try {
    normnet::PipelineConfig cfg = normnet::PipelineConfig::load(config_path);
    if (!out_override.empty()) cfg.out_dir = out_override;
    out_dir = cfg.out_dir;
    if (stage == "report") {
      normnet::run_pipeline(cfg);
    } else {
      normnet::run_stage(cfg, stage);
    }
    return 0;
  } catch (const normnet::StageFailure& e) {
    std::cerr << "normnet: error: " << e.what() << '\n';
    write_error_report(out_dir, e.stage, e.what());
    return e.is_validation ? 2 : 1;
  } catch (const normnet::ValidationError& e) {
    std::cerr << "normnet: error: " << e.what() << '\n';
    write_error_report(out_dir, stage, e.what());
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "normnet: error: " << e.what() << '\n';
    write_error_report(out_dir, stage, e.what());
    return 1;
  }
}
