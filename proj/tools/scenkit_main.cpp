#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "scenkit/cli_report.hpp"
#include "scenkit/error.hpp"

namespace {

int exit_code(const scenkit::Error& e) {
  using namespace scenkit;
  if (dynamic_cast<const IoError*>(&e) || dynamic_cast<const SchemaError*>(&e) ||
      dynamic_cast<const ValidationError*>(&e) || dynamic_cast<const ConfigError*>(&e) ||
      dynamic_cast<const SpecError*>(&e)) {
    return 2;
  }
  return 1;
}

std::optional<std::filesystem::path> opt_path(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::filesystem::path(s);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace scenkit;
  CLI::App app{"Scenario extraction, complexity scoring and replay on highD-format data"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "Config file (default: $SCENKIT_CONFIG)");

  ExtractOptions ex;
  std::string ex_data, ex_out;
  auto* extract = app.add_subcommand("extract", "Build the challenger scenario catalog");
  extract->add_option("--data-dir", ex_data, "Directory with NN_*.csv files")->required();
  extract->add_option("--recording", ex.recordings, "Recording id (repeatable; default all)")
      ->delimiter(',');
  extract->add_option("--out", ex_out, "Output directory")->required();

  ScoreOptions sc;
  std::string sc_catalog, sc_data, sc_weights, sc_out;
  auto* score = app.add_subcommand("score", "Add complexity to a catalog");
  score->add_option("--catalog", sc_catalog, "catalog.jsonl")->required();
  score->add_option("--data-dir", sc_data, "Directory with the recordings")->required();
  score->add_option("--weights-file", sc_weights, "13 weights overriding the config");
  score->add_option("--out", sc_out, "Histogram directory (default: next to the catalog)");

  SimulateOptions si;
  std::string si_catalog, si_data, si_tiers = "lowest,average,highest", si_out;
  auto* simulate = app.add_subcommand("simulate", "Replay complexity tiers with the automated ego");
  simulate->add_option("--catalog", si_catalog, "Scored catalog.jsonl")->required();
  simulate->add_option("--data-dir", si_data, "Directory with the recordings")->required();
  simulate->add_option("--tiers", si_tiers, "Comma-separated subset of lowest,average,highest");
  simulate->add_option("--n", si.n, "Scenarios per tier")->capture_default_str();
  simulate->add_option("--out", si_out, "Output directory (default: next to the catalog)");

  SynthOptions sy;
  std::string sy_out;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus with ground truth");
  synth->add_option("--out", sy_out, "Output directory")->required();
  synth->add_option("--corpus", sy.corpus, "oracle or tiered")->capture_default_str();
  synth->add_option("--seed", sy.seed, "RNG seed")->capture_default_str();
  synth->add_option("--n", sy.n, "Specs (oracle) or specs per tier (tiered)")->capture_default_str();
  synth->add_option("--per-recording", sy.per_recording, "Specs per recording")
      ->capture_default_str();

  ReportOptions re;
  std::string re_catalog, re_out;
  auto* report = app.add_subcommand("report", "Summarize a catalog and replay results");
  report->add_option("--catalog", re_catalog, "catalog.jsonl")->required();
  report->add_option("--out", re_out, "Output directory (default: next to the catalog)");

  auto* config = app.add_subcommand("config", "Print the effective configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const PipelineConfig cfg = resolve_config(opt_path(config_path));
    if (*extract) {
      ex.data_dir = ex_data;
      ex.out_dir = ex_out;
      const auto s = cmd_extract(ex, cfg, std::cerr);
      fmt::print("{} vehicles, {} after free-driving filter, {} with challenger\n",
                 s.total.total_vehicles, s.total.scenarios_after_free_driving_filter,
                 s.total.scenarios_with_challenger);
    } else if (*score) {
      sc.catalog = sc_catalog;
      sc.data_dir = sc_data;
      sc.weights_file = opt_path(sc_weights);
      sc.out_dir = opt_path(sc_out);
      const auto h = cmd_score(sc, cfg, std::cerr);
      fmt::print("{} scored, mean {:.4f}; low {}, medium {}, high {}\n", h.count, h.mean,
                 h.classes[0], h.classes[1], h.classes[2]);
    } else if (*simulate) {
      si.catalog = si_catalog;
      si.data_dir = si_data;
      si.tiers = parse_tiers(si_tiers);
      si.out_dir = opt_path(si_out);
      const auto s = cmd_simulate(si, cfg, std::cerr);
      for (const auto& t : s.tiers) {
        fmt::print("{:<8} scenarios {:>4}  critical {:>4}  accidents {:>3}  mean min-TTC {:.3f}\n",
                   to_string(t.tier), t.scenarios, t.critical, t.accidents, t.mean_min_ttc);
      }
    } else if (*synth) {
      sy.out_dir = sy_out;
      const auto recs = cmd_synth(sy, std::cerr);
      fmt::print("{} recording(s) written to {}\n", recs.size(), sy_out);
    } else if (*report) {
      re.catalog = re_catalog;
      re.out_dir = opt_path(re_out);
      fmt::print("{}", cmd_report(re, std::cerr));
    } else if (*config) {
      fmt::print("{}", dump_config(cfg));
    }
  } catch (const Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return exit_code(e);
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}
