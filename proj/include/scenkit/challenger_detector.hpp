#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "scenkit/config.hpp"
#include "scenkit/core_model.hpp"

namespace scenkit {

struct PathSample {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double vx = 0.0;
};

struct PredictedPath {
  int origin_frame = 0;
  double horizon_s = 0.0;
  std::vector<PathSample> samples;  // t = 0, step, ..., horizon
};

/// State `t` seconds ahead: acceleration decays linearly to zero over
/// accel_decay_s, lateral velocity over lateral_decay_s, speed floored at 0.
PathSample predict_state(const TrackPoint& state, double t, const ChallengerParams& p = {});

/// Throws ArgumentError for a non-positive horizon.
PredictedPath predict_trajectory(const TrackPoint& state, double horizon_s,
                                 const ChallengerParams& p = {});

enum class ConflictType { path_overlap, sub_safety_gap };
std::string_view to_string(ConflictType c);
ConflictType parse_conflict_type(std::string_view label);

struct ChallengerEvent {
  int tp_id = 0;
  int onset_frame = 0;
  ConflictType conflict_type = ConflictType::path_overlap;
  double min_predicted_gap = 0.0;  // smallest footprint separation over the onset prediction
};

/// At most one event per TP (its first conflict), sorted by onset then id.
std::vector<ChallengerEvent> detect_challengers(const Scenario& scenario,
                                                const ChallengerParams& p = {},
                                                const RoiParams& roi = {});

std::optional<ChallengerEvent> first_challenger(std::span<const ChallengerEvent> events);

}  // namespace scenkit
