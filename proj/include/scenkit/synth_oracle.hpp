#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scenkit/core_model.hpp"
#include "scenkit/functional_classifier.hpp"
#include "scenkit/highd_ingest.hpp"
#include "scenkit/maneuver_classifier.hpp"

namespace scenkit {

enum class Template {
  free_driving,
  platoon,
  cut_in,
  cut_out,
  braking_lead,
  overtake,
  rear_approach,
  ego_lane_change,
  alongside_drift,
};
inline constexpr int kTemplateCount = 9;
std::string_view to_string(Template t);
Template parse_template(std::string_view label);
/// Whether the template scripts a challenger for its ego.
bool has_challenger(Template t);

struct ScriptSpec {
  Template kind = Template::free_driving;
  Side side = Side::left;
  double severity = 0.5;  // 0 = mild, 1 = severe
  std::uint64_t seed = 0;
  double duration_s = 16.0;
  int lane_count = 3;
};

/// Uniform doubles from mt19937_64: a + (b - a) * ((r >> 11) * 2^-53).
class SynthRng {
 public:
  explicit SynthRng(std::uint64_t seed);
  double uniform(double a, double b);
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

struct GtScenario {
  std::size_t spec_index = 0;
  ScriptSpec spec;
  std::string variant;  // zone variant of cut-in / ego-lane-change, else empty
  int ego_id = 0;
  Carriageway carriageway = Carriageway::lower;
  int first_frame = 0;
  int last_frame = 0;
  std::optional<int> challenger_id;
  std::optional<FunctionalClass> functional;
  std::vector<int> vehicle_ids;
  std::vector<int> scripted_ids;  // template actors (background excluded)
  std::map<int, std::vector<ManeuverSegment>> maneuvers;  // relative to the ego
  std::map<int, int> lane_changes;  // scripted count per vehicle
};

struct GroundTruth {
  int recording_id = 0;
  std::vector<GtScenario> scenarios;

  std::string to_json() const;
  static GroundTruth from_json(const std::string& text);
};

struct SynthRecording {
  RecordingMeta meta;
  std::vector<Track> tracks;  // normalized
  GroundTruth truth;

  Recording recording() const { return make_recording(meta, tracks); }
};

/// Throws SpecError for an empty list or an inconsistent spec.
SynthRecording generate_recording(std::span<const ScriptSpec> specs, int recording_id = 1);

/// CSV triplet plus NN_groundtruth.json.
void write_synth(const std::filesystem::path& dir, const SynthRecording& rec);
GroundTruth load_ground_truth(const std::filesystem::path& dir, int recording_id);

/// Challenger templates at three severity tiers; spec i belongs to tier i / n.
std::vector<ScriptSpec> tiered_corpus(std::uint64_t seed, int n_per_tier);
/// Every template, random sides and severities.
std::vector<ScriptSpec> oracle_corpus(std::uint64_t seed, int n);
/// Splits specs into recordings of at most `per_recording` specs.
std::vector<SynthRecording> generate_corpus(std::span<const ScriptSpec> specs,
                                            int per_recording = 20, int first_recording_id = 1);

/// Versioned constants of the generator, as JSON text.
std::string synth_manifest();

}  // namespace scenkit
