#include "scenkit/cli_report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "scenkit/complexity_engine.hpp"
#include "scenkit/criticality_metrics.hpp"
#include "scenkit/error.hpp"
#include "scenkit/highd_ingest.hpp"
#include "scenkit/parallel.hpp"
#include "scenkit/replay_simulator.hpp"
#include "scenkit/synth_oracle.hpp"

namespace scenkit {
namespace {

fs::path out_or_parent(const std::optional<fs::path>& out, const fs::path& catalog) {
  if (out) return *out;
  const fs::path parent = catalog.parent_path();
  return parent.empty() ? fs::path(".") : parent;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError(fmt::format("cannot create {}: {}", dir.string(), ec.message()));
}

std::string read_text(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError(fmt::format("cannot open {}", path.string()));
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

// Loads each recording named in the catalog once, in id order.
std::map<int, Recording> load_catalog_recordings(const fs::path& data_dir,
                                                 const std::vector<CatalogEntry>& entries) {
  std::map<int, Recording> out;
  for (const auto& e : entries) {
    if (!out.contains(e.recording_id)) out.emplace(e.recording_id, load_recording(data_dir, e.recording_id));
  }
  return out;
}

std::string fixed(double v) { return fmt::format("{:.6f}", v); }

std::string opt_int(const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); }

}  // namespace

std::string stats_csv(const std::vector<std::pair<int, ExtractionStats>>& rows,
                      const ExtractionStats& total) {
  std::string out = "recording_id,total_vehicles,after_free_driving_filter,with_challenger\n";
  auto line = [&](const std::string& id, const ExtractionStats& s) {
    out += fmt::format("{},{},{},{}\n", id, s.total_vehicles, s.scenarios_after_free_driving_filter,
                       s.scenarios_with_challenger);
  };
  for (const auto& [id, s] : rows) line(std::to_string(id), s);
  line("all", total);
  return out;
}

ExtractionStats read_stats_total(const fs::path& path) {
  std::istringstream in(read_text(path));
  std::string line;
  while (std::getline(in, line)) {
    if (!line.starts_with("all,")) continue;
    ExtractionStats s;
    if (std::sscanf(line.c_str(), "all,%d,%d,%d", &s.total_vehicles,
                    &s.scenarios_after_free_driving_filter, &s.scenarios_with_challenger) != 3) {
      break;
    }
    return s;
  }
  throw SchemaError(fmt::format("{}: no valid 'all' row", path.string()));
}

ExtractSummary cmd_extract(const ExtractOptions& opts, const PipelineConfig& cfg, std::ostream& log) {
  cfg.validate();
  std::vector<int> ids = opts.recordings.empty() ? list_recordings(opts.data_dir) : opts.recordings;
  if (ids.empty()) throw IoError(fmt::format("no recordings in {}", opts.data_dir.string()));
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

  // Load and validate everything first so a bad input leaves no output behind.
  std::vector<Recording> recordings;
  ExtractSummary summary;
  for (const int id : ids) {
    ValidationReport report;
    recordings.push_back(load_recording(opts.data_dir, id, &report));
    for (const auto& w : report.warnings) {
      log << fmt::format("warning: recording {}: {}\n", id, w.message);
    }
    summary.warnings += report.warnings.size();
  }

  std::vector<CatalogEntry> catalog;
  for (const auto& rec : recordings) {
    RecordingAnalysis analysis = analyze_recording(rec, cfg);
    summary.per_recording.emplace_back(analysis.recording_id, analysis.stats);
    summary.total += analysis.stats;
    auto entries = catalog_entries(analysis);
    catalog.insert(catalog.end(), entries.begin(), entries.end());
  }
  summary.catalog_entries = catalog.size();

  ensure_dir(opts.out_dir);
  write_atomically(opts.out_dir / "catalog.jsonl", catalog_text(catalog));
  write_atomically(opts.out_dir / "stats.csv", stats_csv(summary.per_recording, summary.total));
  return summary;
}

void ComplexityHistogram::add(double value) {
  classes[static_cast<std::size_t>(complexity_class(value))] += 1;
  const int bin = std::min(kHistogramBins - 1, static_cast<int>(value * kHistogramBins));
  bins[static_cast<std::size_t>(bin)] += 1;
  mean += (value - mean) / static_cast<double>(++count);
}

std::string ComplexityHistogram::to_csv() const {
  std::string out = "kind,label,lower,upper,count\n";
  const char* names[] = {"low", "medium", "high"};
  for (int c = 0; c < 3; ++c) {
    out += fmt::format("class,{},{},{},{}\n", names[c], fixed(c / 3.0), fixed((c + 1) / 3.0),
                       classes[static_cast<std::size_t>(c)]);
  }
  for (int b = 0; b < kHistogramBins; ++b) {
    out += fmt::format("bin,{},{},{},{}\n", b, fixed(static_cast<double>(b) / kHistogramBins),
                       fixed(static_cast<double>(b + 1) / kHistogramBins),
                       bins[static_cast<std::size_t>(b)]);
  }
  return out;
}

ComplexityHistogram cmd_score(const ScoreOptions& opts, const PipelineConfig& cfg_in,
                              std::ostream& log) {
  PipelineConfig cfg = cfg_in;
  if (opts.weights_file) cfg.complexity.weights = load_weights_file(*opts.weights_file);
  validate_weights(cfg.complexity.weights);
  cfg.validate();

  std::vector<CatalogEntry> entries = read_catalog(opts.catalog);
  const auto recordings = load_catalog_recordings(opts.data_dir, entries);
  const auto scores = parallel_map(entries.size(), [&](std::size_t i) {
    const auto& e = entries[i];
    const Scenario s = scenario_for(recordings.at(e.recording_id), e.ego_id, cfg);
    return scenario_complexity(s, cfg.complexity.weights, cfg);
  });

  ComplexityHistogram hist;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    entries[i].complexity = ComplexityFields{scores[i].value, complexity_class(scores[i].value),
                                             scores[i].argmax_frame};
    hist.add(scores[i].value);
  }
  if (entries.empty()) log << "warning: catalog is empty\n";

  const fs::path out = out_or_parent(opts.out_dir, opts.catalog);
  ensure_dir(out);
  write_atomically(opts.catalog, catalog_text(entries));
  write_atomically(out / "complexity_hist.csv", hist.to_csv());
  return hist;
}

std::string_view to_string(Tier t) {
  switch (t) {
    case Tier::lowest: return "lowest";
    case Tier::average: return "average";
    case Tier::highest: return "highest";
  }
  return "lowest";
}

Tier parse_tier(std::string_view label) {
  if (label == "lowest") return Tier::lowest;
  if (label == "average") return Tier::average;
  if (label == "highest") return Tier::highest;
  throw ArgumentError(fmt::format("unknown tier '{}'", label));
}

std::vector<Tier> parse_tiers(std::string_view list) {
  std::vector<Tier> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t comma = std::min(list.find(',', start), list.size());
    const std::string_view item = list.substr(start, comma - start);
    if (!item.empty()) out.push_back(parse_tier(item));
    start = comma + 1;
  }
  return out;
}

std::vector<std::size_t> select_tier(const std::vector<CatalogEntry>& entries, Tier tier,
                                     std::size_t n) {
  std::vector<std::size_t> idx(entries.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (!entries[i].complexity) throw SchemaError("catalog is not scored; run score first");
    idx[i] = i;
  }
  double mean = 0.0;
  for (const auto& e : entries) mean += e.complexity->value;
  if (!entries.empty()) mean /= static_cast<double>(entries.size());

  auto key = [&](std::size_t i) {
    const double c = entries[i].complexity->value;
    switch (tier) {
      case Tier::lowest: return c;
      case Tier::average: return std::abs(c - mean);
      case Tier::highest: return -c;
    }
    return c;
  };
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const double ka = key(a), kb = key(b);
    if (ka != kb) return ka < kb;
    return std::tie(entries[a].recording_id, entries[a].ego_id) <
           std::tie(entries[b].recording_id, entries[b].ego_id);
  });
  idx.resize(std::min(n, idx.size()));
  return idx;
}

SimulateSummary cmd_simulate(const SimulateOptions& opts, const PipelineConfig& cfg,
                             std::ostream& log) {
  cfg.validate();
  if (opts.n < 0) throw ArgumentError("n must be non-negative");
  const std::vector<CatalogEntry> entries = read_catalog(opts.catalog);
  std::size_t n = static_cast<std::size_t>(opts.n);
  if (n > entries.size()) {
    log << fmt::format("warning: n={} exceeds the catalog size {}, clamping\n", n, entries.size());
    n = entries.size();
  }

  std::vector<std::pair<Tier, std::vector<std::size_t>>> selections;
  for (const Tier t : opts.tiers) selections.emplace_back(t, select_tier(entries, t, n));

  std::vector<CatalogEntry> needed;
  for (const auto& [t, idx] : selections) {
    for (const std::size_t i : idx) needed.push_back(entries[i]);
  }
  const auto recordings = load_catalog_recordings(opts.data_dir, needed);

  SimulateSummary summary;
  std::vector<std::string> cdf_rows;
  for (const auto& [tier, idx] : selections) {
    struct Outcome {
      bool too_short = false;
      SimResult result;
    };
    const auto outcomes = parallel_map(idx.size(), [&](std::size_t k) {
      const CatalogEntry& e = entries[idx[k]];
      const Scenario full = scenario_for(recordings.at(e.recording_id), e.ego_id, cfg);
      const ComplexityScore score = scenario_complexity(full, cfg.complexity.weights, cfg);
      Outcome o;
      try {
        const Scenario s = start_at_peak_complexity(full, score, cfg.sim);
        o.result = run_replay(s, cfg.controller, cfg);
      } catch (const TooShortError&) {
        o.too_short = true;
      }
      return o;
    });

    TierSummary ts;
    ts.tier = tier;
    ts.selected = static_cast<int>(idx.size());
    std::vector<double> kept;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const CatalogEntry& e = entries[idx[k]];
      if (outcomes[k].too_short) {
        ++ts.too_short;
        continue;
      }
      const SimResult& r = outcomes[k].result;
      RunRecord rec{tier, e.recording_id, e.ego_id, e.complexity->value, r.min_ttc,
                    r.collided, r.blame, r.collision_frame, r.collision_partner};
      summary.runs.push_back(rec);
      if (r.collided && r.blame == Blame::other) {
        ++ts.excluded_other_blame;
        continue;
      }
      ++ts.scenarios;
      if (r.collided) ++ts.accidents;
      if (is_critical(r.min_ttc, cfg.criticality.critical_ttc_s)) ++ts.critical;
      kept.push_back(r.min_ttc);
    }
    if (ts.too_short > 0) {
      log << fmt::format("warning: tier {}: {} scenario(s) too short after the complexity peak\n",
                         to_string(tier), ts.too_short);
    }
    if (!kept.empty()) {
      double sum = 0.0;
      for (const double v : kept) sum += v;
      ts.mean_min_ttc = sum / static_cast<double>(kept.size());
    }
    std::sort(kept.begin(), kept.end());
    for (std::size_t k = 0; k < kept.size(); ++k) {
      cdf_rows.push_back(fmt::format("{},{},{}\n", to_string(tier), fixed(kept[k]),
                                     fixed(static_cast<double>(k + 1) / static_cast<double>(kept.size()))));
    }
    summary.tiers.push_back(ts);
  }

  std::string results =
      "tier,recording_id,ego_id,complexity,min_ttc,critical,collided,blame,collision_frame,"
      "collision_partner\n";
  for (const auto& r : summary.runs) {
    results += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", to_string(r.tier), r.recording_id,
                           r.ego_id, fixed(r.complexity), fixed(r.min_ttc),
                           is_critical(r.min_ttc, cfg.criticality.critical_ttc_s) ? 1 : 0,
                           r.collided ? 1 : 0, to_string(r.blame), opt_int(r.collision_frame),
                           opt_int(r.collision_partner));
  }
  std::string table =
      "tier,selected,too_short,excluded_other_blame,scenarios,critical,accidents,mean_min_ttc\n";
  for (const auto& t : summary.tiers) {
    table += fmt::format("{},{},{},{},{},{},{},{}\n", to_string(t.tier), t.selected, t.too_short,
                         t.excluded_other_blame, t.scenarios, t.critical, t.accidents,
                         fixed(t.mean_min_ttc));
  }
  std::string cdf = "tier,min_ttc,cdf\n";
  for (const auto& row : cdf_rows) cdf += row;

  const fs::path out = out_or_parent(opts.out_dir, opts.catalog);
  ensure_dir(out);
  write_atomically(out / "results.csv", results);
  write_atomically(out / "table.csv", table);
  write_atomically(out / "ttc_cdf.csv", cdf);
  return summary;
}

std::vector<SynthRecording> cmd_synth(const SynthOptions& opts, std::ostream& log) {
  if (opts.n < 0) throw ArgumentError("n must be non-negative");
  if (opts.per_recording < 1) throw ArgumentError("per-recording must be at least 1");
  std::vector<ScriptSpec> specs;
  if (opts.corpus == "oracle") {
    specs = oracle_corpus(opts.seed, opts.n);
  } else if (opts.corpus == "tiered") {
    specs = tiered_corpus(opts.seed, opts.n);
  } else {
    throw ArgumentError(fmt::format("unknown corpus '{}' (oracle, tiered)", opts.corpus));
  }
  if (specs.empty()) {
    log << "warning: empty corpus, nothing written\n";
    return {};
  }
  auto recordings = generate_corpus(specs, opts.per_recording);
  ensure_dir(opts.out_dir);
  for (const auto& r : recordings) write_synth(opts.out_dir, r);
  write_atomically(opts.out_dir / "synth_manifest.json", synth_manifest());
  return recordings;
}

std::vector<CorridorRow> replication_corridor(const ExtractionStats& stats,
                                              const std::vector<CatalogEntry>& entries) {
  std::vector<CorridorRow> rows;
  auto add = [&](std::string stage, std::string metric, double expected, double tol,
                 double observed) {
    rows.push_back({std::move(stage), std::move(metric), expected, tol, observed,
                    std::abs(observed - expected) <= tol + 1e-12});
  };
  add("ingest", "total tracks", 110507, 0, stats.total_vehicles);
  add("extract", "after free-driving filter", 110007, 0.005 * 110007,
      stats.scenarios_after_free_driving_filter);
  add("challenger", "challenger scenarios", 67455, 0.05 * 67455, stats.scenarios_with_challenger);

  int class_one = 0;
  std::vector<int> vehicles;
  double mean = 0.0;
  int scored = 0, high = 0;
  for (const auto& e : entries) {
    if (e.functional.scenario == FunctionalScenario::I) ++class_one;
    vehicles.push_back(e.vehicles);
    if (e.complexity) {
      mean += e.complexity->value;
      ++scored;
      if (e.complexity->cls == ComplexityClass::high) ++high;
    }
  }
  add("classify", "scenario I count", 20090, 0.1 * 20090, class_one);
  std::sort(vehicles.begin(), vehicles.end());
  const double median =
      vehicles.empty() ? 0.0
      : vehicles.size() % 2 == 1
          ? vehicles[vehicles.size() / 2]
          : 0.5 * (vehicles[vehicles.size() / 2 - 1] + vehicles[vehicles.size() / 2]);
  add("extract", "vehicles per scenario, median", 7, 0, median);
  add("extract", "vehicles per scenario, max", 19, 0, vehicles.empty() ? 0 : vehicles.back());
  add("complexity", "mean complexity", 0.38, 0.05, scored ? mean / scored : 0.0);
  add("complexity", "high-complexity share", 0.0, 0.001,
      scored ? static_cast<double>(high) / scored : 0.0);
  return rows;
}

std::string corridor_text(const std::vector<CorridorRow>& rows) {
  std::string out = fmt::format("{:<11} {:<32} {:>12} {:>12} {:>12}  {}\n", "stage", "metric",
                                "expected", "tolerance", "observed", "status");
  for (const auto& r : rows) {
    out += fmt::format("{:<11} {:<32} {:>12.4f} {:>12.4f} {:>12.4f}  {}\n", r.stage, r.metric,
                       r.expected, r.tolerance, r.observed, r.within ? "within" : "OUTSIDE");
  }
  return out;
}

std::string cmd_report(const ReportOptions& opts, std::ostream& log) {
  const std::vector<CatalogEntry> entries = read_catalog(opts.catalog);
  const fs::path out = out_or_parent(opts.out_dir, opts.catalog);
  const fs::path dir = out_or_parent(std::nullopt, opts.catalog);
  ensure_dir(out);

  std::map<std::pair<int, int>, int> functional;  // (class, side)
  std::map<int, int> vehicles;
  struct ClassComplexity {
    std::array<int, 3> classes{};
    double sum = 0.0;
    int n = 0;
  };
  std::map<int, ClassComplexity> by_class;
  for (const auto& e : entries) {
    ++functional[{static_cast<int>(e.functional.scenario), static_cast<int>(e.functional.side)}];
    ++vehicles[e.vehicles];
    if (e.complexity) {
      auto& c = by_class[static_cast<int>(e.functional.scenario)];
      c.classes[static_cast<std::size_t>(e.complexity->cls)] += 1;
      c.sum += e.complexity->value;
      ++c.n;
    }
  }

  std::string fh = "functional_scenario,side,count\n";
  for (const auto& [key, count] : functional) {
    fh += fmt::format("{},{},{}\n", to_string(static_cast<FunctionalScenario>(key.first)),
                      to_string(static_cast<Side>(key.second)), count);
  }
  std::string vh = "vehicles,count\n";
  for (const auto& [v, count] : vehicles) vh += fmt::format("{},{}\n", v, count);
  std::string fc = "functional_scenario,low,medium,high,mean\n";
  for (const auto& [cls, c] : by_class) {
    fc += fmt::format("{},{},{},{},{}\n", to_string(static_cast<FunctionalScenario>(cls)),
                      c.classes[0], c.classes[1], c.classes[2], fixed(c.sum / c.n));
  }
  write_atomically(out / "functional_hist.csv", fh);
  write_atomically(out / "vehicles_hist.csv", vh);
  write_atomically(out / "functional_complexity.csv", fc);

  std::string text = fmt::format("catalog: {} challenger scenarios\n", entries.size());
  const fs::path stats_path = dir / "stats.csv";
  std::optional<ExtractionStats> stats;
  if (fs::exists(stats_path)) {
    stats = read_stats_total(stats_path);
    text += fmt::format("funnel: {} vehicles -> {} after free-driving filter -> {} with challenger\n",
                        stats->total_vehicles, stats->scenarios_after_free_driving_filter,
                        stats->scenarios_with_challenger);
  } else {
    log << fmt::format("note: {} not found, funnel omitted\n", stats_path.string());
  }
  text += "\nfunctional scenarios\n";
  for (const auto& [key, count] : functional) {
    text += fmt::format("  {:<4} {:<6} {}\n", to_string(static_cast<FunctionalScenario>(key.first)),
                        to_string(static_cast<Side>(key.second)), count);
  }
  if (!entries.empty()) {
    text += fmt::format("\nvehicles per scenario: min {}, max {}\n", vehicles.begin()->first,
                        vehicles.rbegin()->first);
  }
  ComplexityHistogram hist;
  for (const auto& e : entries) {
    if (e.complexity) hist.add(e.complexity->value);
  }
  if (hist.count > 0) {
    text += fmt::format("complexity: mean {:.4f}; low {}, medium {}, high {}\n", hist.mean,
                        hist.classes[0], hist.classes[1], hist.classes[2]);
  }
  const fs::path table_path = dir / "table.csv";
  if (fs::exists(table_path)) {
    text += "\nreplay by tier\n";
    std::istringstream in(read_text(table_path));
    std::string line;
    while (std::getline(in, line)) text += "  " + line + "\n";
  }
  if (stats && stats->total_vehicles > 100000) {
    text += "\nreplication corridor\n" + corridor_text(replication_corridor(*stats, entries));
  }
  write_atomically(out / "report.txt", text);
  return text;
}

PipelineConfig resolve_config(const std::optional<fs::path>& flag) {
  if (flag) return load_config(*flag);
  if (const char* env = std::getenv("SCENKIT_CONFIG"); env != nullptr && *env != '\0') {
    return load_config(env);
  }
  return PipelineConfig{};
}

}  // namespace scenkit
