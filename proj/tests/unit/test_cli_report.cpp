#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "scenkit/cli_report.hpp"
#include "scenkit/error.hpp"
#include "test_util.hpp"

using namespace scenkit;
using scenkit::testing::temp_dir;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

std::vector<ScriptSpec> ten_specs() {
  const Template kinds[] = {Template::cut_in,         Template::free_driving, Template::cut_out,
                            Template::braking_lead,   Template::overtake,     Template::platoon,
                            Template::rear_approach,  Template::free_driving, Template::alongside_drift,
                            Template::ego_lane_change};
  std::vector<ScriptSpec> out;
  std::uint64_t seed = 100;
  for (const Template k : kinds) {
    ScriptSpec s;
    s.kind = k;
    s.severity = 0.6;
    s.seed = seed++;
    s.side = seed % 2 == 0 ? Side::left : Side::right;
    out.push_back(s);
  }
  return out;
}

struct Workspace {
  fs::path root;
  fs::path data;
  fs::path out;
  SynthRecording rec;

  explicit Workspace(const std::string& name) : root(temp_dir(name)) {
    data = root / "data";
    out = root / "out";
    rec = generate_recording(ten_specs(), 1);
    write_synth(data, rec);
  }
  ~Workspace() { fs::remove_all(root); }
};

}  // namespace

TEST(CmdExtract, FunnelOfTenSpecs) {
  Workspace ws("cli_funnel");
  std::ostringstream log;
  const auto summary = cmd_extract({ws.data, {}, ws.out}, PipelineConfig{}, log);
  EXPECT_EQ(summary.total.total_vehicles, static_cast<int>(ws.rec.tracks.size()));
  EXPECT_LE(summary.total.scenarios_after_free_driving_filter, summary.total.total_vehicles - 2);
  EXPECT_LE(summary.total.scenarios_with_challenger, summary.total.scenarios_after_free_driving_filter);

  const auto catalog = read_catalog(ws.out / "catalog.jsonl");
  EXPECT_EQ(catalog.size(), summary.catalog_entries);
  EXPECT_EQ(static_cast<int>(catalog.size()), summary.total.scenarios_with_challenger);
  for (const auto& gt : ws.rec.truth.scenarios) {
    const bool in_catalog = std::any_of(catalog.begin(), catalog.end(),
                                        [&](const auto& e) { return e.ego_id == gt.ego_id; });
    EXPECT_EQ(in_catalog, gt.challenger_id.has_value()) << to_string(gt.spec.kind);
  }

  const std::string stats = slurp(ws.out / "stats.csv");
  EXPECT_TRUE(stats.starts_with("recording_id,total_vehicles,after_free_driving_filter,with_challenger\n"));
  const auto total = read_stats_total(ws.out / "stats.csv");
  EXPECT_EQ(total.total_vehicles, summary.total.total_vehicles);
  EXPECT_EQ(total.scenarios_with_challenger, summary.total.scenarios_with_challenger);
}

TEST(CmdExtract, CatalogIsSortedAndSchemaValid) {
  Workspace ws("cli_schema");
  std::ostringstream log;
  cmd_extract({ws.data, {}, ws.out}, PipelineConfig{}, log);
  std::istringstream lines(slurp(ws.out / "catalog.jsonl"));
  std::string line;
  std::pair<int, int> prev{0, 0};
  int count = 0;
  while (std::getline(lines, line)) {
    const auto j = nlohmann::json::parse(line);
    for (const char* key : {"recording_id", "ego_id", "functional_scenario", "side", "vehicles",
                            "duration_s", "challenger_id", "onset_frame"}) {
      EXPECT_TRUE(j.contains(key)) << key;
    }
    const std::pair<int, int> cur{j["recording_id"].get<int>(), j["ego_id"].get<int>()};
    EXPECT_LT(prev, cur);
    prev = cur;
    EXPECT_NO_THROW(parse_functional(j["functional_scenario"].get<std::string>()));
    EXPECT_EQ(to_jsonl(parse_catalog_line(line)), line);
    ++count;
  }
  EXPECT_GT(count, 0);
  EXPECT_THROW(parse_catalog_line("{\"recording_id\": 1}"), SchemaError);
  EXPECT_THROW(parse_catalog_line("not json"), SchemaError);
}

TEST(CmdExtract, MissingFileLeavesNoPartialOutput) {
  Workspace ws("cli_missing");
  fs::remove(ws.data / "01_tracks.csv");
  std::ostringstream log;
  EXPECT_THROW(cmd_extract({ws.data, {}, ws.out}, PipelineConfig{}, log), IoError);
  EXPECT_FALSE(fs::exists(ws.out / "catalog.jsonl"));
  EXPECT_FALSE(fs::exists(ws.out / "stats.csv"));
}

TEST(CmdScore, OccupancyOnlyWeightsGiveOccupancyFraction) {
  Workspace ws("cli_score");
  std::ostringstream log;
  cmd_extract({ws.data, {}, ws.out}, PipelineConfig{}, log);
  std::ofstream(ws.root / "w.txt") << "1 0 0 0 0 0 0 0 0 0 0 0 0\n";
  const auto hist = cmd_score({ws.out / "catalog.jsonl", ws.data, ws.root / "w.txt", std::nullopt},
                              PipelineConfig{}, log);
  const Recording rec = ws.rec.recording();
  const auto catalog = read_catalog(ws.out / "catalog.jsonl");
  ASSERT_EQ(hist.count, catalog.size());
  for (const auto& e : catalog) {
    ASSERT_TRUE(e.complexity.has_value());
    const Scenario s = scenario_for(rec, e.ego_id);
    std::size_t peak = 0;
    for (const auto& scene : s.scenes) peak = std::max(peak, scene.tp_states.size());
    EXPECT_NEAR(e.complexity->value, std::min(peak / 11.0, 1.0), 1e-9);
  }
  const std::string csv = slurp(ws.out / "complexity_hist.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 3 + kHistogramBins);

  std::ofstream(ws.root / "bad.txt") << "0.5 0.6 0 0 0 0 0 0 0 0 0 0 0\n";
  EXPECT_THROW(cmd_score({ws.out / "catalog.jsonl", ws.data, ws.root / "bad.txt", std::nullopt},
                         PipelineConfig{}, log),
               ConfigError);
}

TEST(SelectTier, OrderingAndTies) {
  std::vector<CatalogEntry> entries;
  const double values[] = {0.5, 0.1, 0.9, 0.3, 0.3, 0.7};
  for (int i = 0; i < 6; ++i) {
    CatalogEntry e;
    e.recording_id = 1;
    e.ego_id = i + 1;
    e.complexity = ComplexityFields{values[i], complexity_class(values[i]), 1};
    entries.push_back(e);
  }
  EXPECT_EQ(select_tier(entries, Tier::lowest, 3), (std::vector<std::size_t>{1, 3, 4}));
  EXPECT_EQ(select_tier(entries, Tier::highest, 2), (std::vector<std::size_t>{2, 5}));
  // Mean 0.4667: 0.5 is nearest, then the two 0.3 entries in id order.
  EXPECT_EQ(select_tier(entries, Tier::average, 3), (std::vector<std::size_t>{0, 3, 4}));
  EXPECT_TRUE(select_tier(entries, Tier::lowest, 0).empty());
  entries[0].complexity.reset();
  EXPECT_THROW(select_tier(entries, Tier::lowest, 1), SchemaError);
  EXPECT_EQ(parse_tiers("lowest,highest"), (std::vector<Tier>{Tier::lowest, Tier::highest}));
  EXPECT_THROW(parse_tier("middle"), ArgumentError);
}

TEST(CmdSimulate, ZeroClampAndDeterminism) {
  Workspace ws("cli_sim");
  std::ostringstream log;
  cmd_extract({ws.data, {}, ws.out}, PipelineConfig{}, log);
  cmd_score({ws.out / "catalog.jsonl", ws.data, std::nullopt, std::nullopt}, PipelineConfig{}, log);
  const auto catalog = read_catalog(ws.out / "catalog.jsonl");

  SimulateOptions opts{ws.out / "catalog.jsonl", ws.data};
  opts.n = 0;
  const auto empty = cmd_simulate(opts, PipelineConfig{}, log);
  EXPECT_TRUE(empty.runs.empty());
  const std::string header_only = slurp(ws.out / "results.csv");
  EXPECT_EQ(std::count(header_only.begin(), header_only.end(), '\n'), 1);

  std::ostringstream warn;
  opts.n = 1000;
  const auto all = cmd_simulate(opts, PipelineConfig{}, warn);
  EXPECT_NE(warn.str().find("clamping"), std::string::npos);
  for (const auto& t : all.tiers) {
    EXPECT_EQ(t.selected, static_cast<int>(catalog.size()));
    EXPECT_EQ(t.selected, t.too_short + t.excluded_other_blame + t.scenarios);
    EXPECT_LE(t.critical, t.scenarios);
    EXPECT_LE(t.accidents, t.critical);
  }
  const std::string first = slurp(ws.out / "results.csv");
  cmd_simulate(opts, PipelineConfig{}, warn);
  EXPECT_EQ(slurp(ws.out / "results.csv"), first);

  opts.n = -1;
  EXPECT_THROW(cmd_simulate(opts, PipelineConfig{}, log), ArgumentError);
}

TEST(CmdReport, WritesSummaryFiles) {
  Workspace ws("cli_report");
  std::ostringstream log;
  cmd_extract({ws.data, {}, ws.out}, PipelineConfig{}, log);
  cmd_score({ws.out / "catalog.jsonl", ws.data, std::nullopt, std::nullopt}, PipelineConfig{}, log);
  const std::string text = cmd_report({ws.out / "catalog.jsonl", std::nullopt}, log);
  EXPECT_FALSE(text.empty());
  for (const char* f : {"functional_hist.csv", "vehicles_hist.csv", "functional_complexity.csv",
                        "report.txt"}) {
    EXPECT_TRUE(fs::exists(ws.out / f)) << f;
  }
}

TEST(ReplicationCorridor, FlagsEveryStage) {
  ExtractionStats stats;
  stats.total_vehicles = 110507;
  stats.scenarios_after_free_driving_filter = 110007;
  stats.scenarios_with_challenger = 67455;
  const auto rows = replication_corridor(stats, {});
  ASSERT_FALSE(rows.empty());
  EXPECT_TRUE(rows[0].within);
  EXPECT_FALSE(corridor_text(rows).empty());
}
