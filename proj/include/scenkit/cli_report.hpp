#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scenkit/config.hpp"
#include "scenkit/pipeline.hpp"
#include "scenkit/scenario_extractor.hpp"
#include "scenkit/synth_oracle.hpp"

namespace scenkit {

namespace fs = std::filesystem;

inline constexpr int kHistogramBins = 50;

struct ExtractOptions {
  fs::path data_dir;
  std::vector<int> recordings;  // empty: every recording in data_dir
  fs::path out_dir;
};

struct ExtractSummary {
  std::vector<std::pair<int, ExtractionStats>> per_recording;
  ExtractionStats total;
  std::size_t catalog_entries = 0;
  std::size_t warnings = 0;
};

/// Writes catalog.jsonl and stats.csv into out_dir. Every recording is loaded
/// before anything is written.
ExtractSummary cmd_extract(const ExtractOptions& opts, const PipelineConfig& cfg, std::ostream& log);

struct ScoreOptions {
  fs::path catalog;
  fs::path data_dir;
  std::optional<fs::path> weights_file;
  std::optional<fs::path> out_dir;  // defaults to the catalog's directory
};

struct ComplexityHistogram {
  std::array<int, 3> classes{};
  std::array<int, kHistogramBins> bins{};
  double mean = 0.0;
  std::size_t count = 0;

  void add(double value);
  std::string to_csv() const;
};

/// Rewrites the catalog with complexity fields and writes complexity_hist.csv.
ComplexityHistogram cmd_score(const ScoreOptions& opts, const PipelineConfig& cfg, std::ostream& log);

enum class Tier { lowest, average, highest };
std::string_view to_string(Tier t);
Tier parse_tier(std::string_view label);
std::vector<Tier> parse_tiers(std::string_view list);

/// Indices into `entries` (all scored): n lowest, n nearest to the mean, or
/// n highest complexity. Ties break on (recording_id, ego_id).
std::vector<std::size_t> select_tier(const std::vector<CatalogEntry>& entries, Tier tier,
                                     std::size_t n);

struct SimulateOptions {
  fs::path catalog;
  fs::path data_dir;
  std::vector<Tier> tiers{Tier::lowest, Tier::average, Tier::highest};
  int n = 650;
  std::optional<fs::path> out_dir;
};

struct RunRecord {
  Tier tier = Tier::lowest;
  int recording_id = 0;
  int ego_id = 0;
  double complexity = 0.0;
  double min_ttc = 0.0;
  bool collided = false;
  Blame blame = Blame::none;
  std::optional<int> collision_frame;
  std::optional<int> collision_partner;
};

struct TierSummary {
  Tier tier = Tier::lowest;
  int selected = 0;
  int too_short = 0;
  int excluded_other_blame = 0;
  int scenarios = 0;  // replayed and kept
  int critical = 0;
  int accidents = 0;  // ego blame
  double mean_min_ttc = 0.0;
};

struct SimulateSummary {
  std::vector<TierSummary> tiers;
  std::vector<RunRecord> runs;
};

/// Writes results.csv (one row per replay), table.csv (one row per tier) and
/// ttc_cdf.csv (min-TTC samples of kept runs).
SimulateSummary cmd_simulate(const SimulateOptions& opts, const PipelineConfig& cfg,
                             std::ostream& log);

struct SynthOptions {
  fs::path out_dir;
  std::string corpus = "oracle";  // oracle | tiered
  std::uint64_t seed = 1;
  int n = 200;  // oracle: specs, tiered: specs per tier
  int per_recording = 20;
};

/// Writes the CSV triplets, ground truth files and synth_manifest.json.
std::vector<SynthRecording> cmd_synth(const SynthOptions& opts, std::ostream& log);

struct ReportOptions {
  fs::path catalog;
  std::optional<fs::path> out_dir;
};

struct CorridorRow {
  std::string stage;
  std::string metric;
  double expected = 0.0;
  double tolerance = 0.0;  // absolute
  double observed = 0.0;
  bool within = false;
};

/// Observed full-dataset figures against the published ones.
std::vector<CorridorRow> replication_corridor(const ExtractionStats& stats,
                                              const std::vector<CatalogEntry>& entries);
std::string corridor_text(const std::vector<CorridorRow>& rows);

/// Writes functional_hist.csv, vehicles_hist.csv, functional_complexity.csv
/// and report.txt. Uses stats.csv and table.csv when they sit next to the catalog.
std::string cmd_report(const ReportOptions& opts, std::ostream& log);

std::string stats_csv(const std::vector<std::pair<int, ExtractionStats>>& rows,
                      const ExtractionStats& total);
/// Reads the "all" row of stats.csv.
ExtractionStats read_stats_total(const fs::path& path);

/// --config beats SCENKIT_CONFIG; neither means built-in defaults.
PipelineConfig resolve_config(const std::optional<fs::path>& flag);

}  // namespace scenkit
