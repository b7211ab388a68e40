#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "scenkit/challenger_detector.hpp"
#include "scenkit/complexity_engine.hpp"
#include "scenkit/config.hpp"
#include "scenkit/functional_classifier.hpp"
#include "scenkit/highd_ingest.hpp"
#include "scenkit/replay_simulator.hpp"
#include "scenkit/scenario_extractor.hpp"

namespace scenkit {

struct ScenarioAnalysis {
  Scenario scenario;
  std::vector<ChallengerEvent> events;
  std::optional<ChallengerEvent> challenger;
  std::optional<FunctionalClass> functional;
};

struct RecordingAnalysis {
  int recording_id = 0;
  ExtractionStats stats;
  std::vector<ScenarioAnalysis> scenarios;  // after the free-driving filter, by ego id
};

/// Extraction, challenger detection and functional classification.
RecordingAnalysis analyze_recording(const Recording& recording, const PipelineConfig& cfg = {});

struct ComplexityFields {
  double value = 0.0;
  ComplexityClass cls = ComplexityClass::low;
  int argmax_frame = 0;
};

struct CatalogEntry {
  int recording_id = 0;
  int ego_id = 0;
  FunctionalClass functional;
  std::optional<ComplexityFields> complexity;
  int vehicles = 0;
  double duration_s = 0.0;
  int challenger_id = 0;
  int onset_frame = 0;
  ConflictType conflict_type = ConflictType::path_overlap;
  double min_predicted_gap = 0.0;
};

/// One entry per challenger scenario, sorted by (recording_id, ego_id).
std::vector<CatalogEntry> catalog_entries(const RecordingAnalysis& analysis);

std::string to_jsonl(const CatalogEntry& e);
CatalogEntry parse_catalog_line(const std::string& line);
std::string catalog_text(const std::vector<CatalogEntry>& entries);
std::vector<CatalogEntry> read_catalog(const std::filesystem::path& path);

/// Rebuilds the scenario of a catalog entry from its recording.
Scenario scenario_for(const Recording& recording, int ego_id, const PipelineConfig& cfg = {});

}  // namespace scenkit
