#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "scenkit/config.hpp"
#include "scenkit/core_model.hpp"

namespace scenkit {

enum class Maneuver {
  following,
  approaching,
  falling_behind,
  overtaking_left,
  overtaking_right,
  being_overtaken_left,
  being_overtaken_right,
  cut_in_left,
  cut_in_right,
  cut_out_left,
  cut_out_right,
  parallel_driving,
  lead_braking,
};
inline constexpr int kManeuverCount = 13;

std::string_view to_string(Maneuver m);
Maneuver parse_maneuver(std::string_view label);
/// Left/right swap; symmetric labels are fixed points.
Maneuver mirror(Maneuver m);

struct ManeuverSegment {
  int tp_id = 0;
  Maneuver maneuver = Maneuver::following;
  int start_frame = 0;
  int end_frame = 0;  // inclusive
};

/// One detected lane change of a track.
struct LaneChange {
  int crossing_frame = 0;  // first frame in the new lane
  int from_lane = 0;
  int to_lane = 0;
  Side direction = Side::none;
  int start_frame = 0;  // lateral-motion window, inclusive
  int end_frame = 0;
};

/// Lane-id changes whose lateral velocity agrees with the change direction.
/// The window spans the surrounding run of |vy| >= lateral_speed with that sign.
std::vector<LaneChange> detect_lane_changes(const Track& track, const Road& road,
                                            const ManeuverParams& p = {});

/// Inputs of the per-frame decision tree, all relative to the ego.
struct ManeuverInputs {
  int rel_lane = 0;  // +1 = TP one lane to the ego's left
  double dx = 0.0;   // TP center minus ego center, m
  double dv = 0.0;   // TP vx minus ego vx, m/s
  double tp_ax = 0.0;
  double ego_length = 0.0;
  double tp_length = 0.0;
  /// Set while the TP performs a lane change into (+) or out of (-) the ego lane.
  std::optional<Maneuver> lane_change_label;
};

Maneuver decide_maneuver(const ManeuverInputs& in, const ManeuverParams& p = {});

/// Merges equal labels and absorbs segments shorter than min_segment_s into
/// the longer neighbour (the earlier one on ties), shortest first.
std::vector<ManeuverSegment> merge_labels(int tp_id, int first_frame,
                                          const std::vector<Maneuver>& labels, double dt,
                                          const ManeuverParams& p = {});

/// Per-frame labels of a TP over the frames it shares with the ego.
std::vector<std::pair<int, Maneuver>> frame_maneuvers(const Scenario& scenario, int tp_id,
                                                      const ManeuverParams& p = {});

/// Throws LookupError when tp_id is not a participant.
std::vector<ManeuverSegment> classify_maneuvers(const Scenario& scenario, int tp_id,
                                                const ManeuverParams& p = {});

/// Label at `frame` from a segment list, nullopt if uncovered.
std::optional<Maneuver> label_at(const std::vector<ManeuverSegment>& segments, int frame);

}  // namespace scenkit
