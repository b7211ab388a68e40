#include "scenkit/pipeline.hpp"

#include <algorithm>
#include <fstream>

#include <fmt/format.h>
#include <json.hpp>

#include "scenkit/error.hpp"
#include "scenkit/parallel.hpp"

namespace scenkit {

using json = nlohmann::ordered_json;

RecordingAnalysis analyze_recording(const Recording& recording, const PipelineConfig& cfg) {
  RecordingAnalysis out;
  out.recording_id = recording.meta.recording_id;
  auto scenarios = extract_scenarios(recording, cfg.roi, &out.stats);
  out.scenarios = parallel_map(scenarios.size(), [&](std::size_t i) {
    ScenarioAnalysis a;
    a.scenario = std::move(scenarios[i]);
    a.events = detect_challengers(a.scenario, cfg.challenger, cfg.roi);
    a.challenger = first_challenger(a.events);
    if (a.challenger) {
      a.functional = classify_scenario(a.scenario, *a.challenger, cfg.functional, cfg.maneuver);
    }
    return a;
  });
  out.stats.scenarios_with_challenger = static_cast<int>(std::count_if(
      out.scenarios.begin(), out.scenarios.end(), [](const auto& a) { return a.challenger.has_value(); }));
  return out;
}

std::vector<CatalogEntry> catalog_entries(const RecordingAnalysis& analysis) {
  std::vector<CatalogEntry> out;
  for (const auto& a : analysis.scenarios) {
    if (!a.challenger) continue;
    CatalogEntry e;
    e.recording_id = analysis.recording_id;
    e.ego_id = a.scenario.ego_id;
    e.functional = *a.functional;
    e.vehicles = vehicles_per_scenario(a.scenario);
    e.duration_s = a.scenario.duration_s;
    e.challenger_id = a.challenger->tp_id;
    e.onset_frame = a.challenger->onset_frame;
    e.conflict_type = a.challenger->conflict_type;
    e.min_predicted_gap = a.challenger->min_predicted_gap;
    out.push_back(e);
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    return std::tie(x.recording_id, x.ego_id) < std::tie(y.recording_id, y.ego_id);
  });
  return out;
}

std::string to_jsonl(const CatalogEntry& e) {
  json j;
  j["recording_id"] = e.recording_id;
  j["ego_id"] = e.ego_id;
  j["functional_scenario"] = to_string(e.functional.scenario);
  j["side"] = to_string(e.functional.side);
  j["vehicles"] = e.vehicles;
  j["duration_s"] = std::round(e.duration_s * 100.0) / 100.0;
  j["challenger_id"] = e.challenger_id;
  j["onset_frame"] = e.onset_frame;
  j["conflict_type"] = to_string(e.conflict_type);
  j["min_predicted_gap"] = std::round(e.min_predicted_gap * 1e6) / 1e6;
  if (e.complexity) {
    j["complexity"] = std::round(e.complexity->value * 1e12) / 1e12;
    j["complexity_class"] = to_string(e.complexity->cls);
    j["argmax_frame"] = e.complexity->argmax_frame;
  }
  return j.dump();
}

CatalogEntry parse_catalog_line(const std::string& line) {
  CatalogEntry e;
  try {
    const json j = json::parse(line);
    e.recording_id = j.at("recording_id").get<int>();
    e.ego_id = j.at("ego_id").get<int>();
    e.functional.scenario = parse_functional(j.at("functional_scenario").get<std::string>());
    e.functional.side = parse_side(j.at("side").get<std::string>());
    e.vehicles = j.at("vehicles").get<int>();
    e.duration_s = j.at("duration_s").get<double>();
    e.challenger_id = j.at("challenger_id").get<int>();
    e.onset_frame = j.at("onset_frame").get<int>();
    e.conflict_type = parse_conflict_type(j.at("conflict_type").get<std::string>());
    e.min_predicted_gap = j.at("min_predicted_gap").get<double>();
    if (j.contains("complexity")) {
      ComplexityFields c;
      c.value = j.at("complexity").get<double>();
      c.cls = complexity_class(c.value);
      c.argmax_frame = j.at("argmax_frame").get<int>();
      e.complexity = c;
    }
  } catch (const json::exception& ex) {
    throw SchemaError(fmt::format("catalog line: {}", ex.what()));
  }
  return e;
}

std::string catalog_text(const std::vector<CatalogEntry>& entries) {
  std::string out;
  for (const auto& e : entries) {
    out += to_jsonl(e);
    out += '\n';
  }
  return out;
}

std::vector<CatalogEntry> read_catalog(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError(fmt::format("cannot open catalog {}", path.string()));
  std::vector<CatalogEntry> out;
  std::string line;
  long n = 0;
  while (std::getline(f, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      out.push_back(parse_catalog_line(line));
    } catch (const SchemaError& e) {
      throw SchemaError(fmt::format("{}:{}: {}", path.string(), n, e.what()));
    }
  }
  return out;
}

Scenario scenario_for(const Recording& recording, int ego_id, const PipelineConfig& cfg) {
  return build_scenario(recording, recording.track(ego_id), cfg.roi);
}

}  // namespace scenkit
