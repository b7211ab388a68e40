#pragma once

#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "scenkit/complexity_engine.hpp"
#include "scenkit/config.hpp"
#include "scenkit/core_model.hpp"
#include "scenkit/roi_engine.hpp"

namespace scenkit {

enum class Blame { none, ego, other };
std::string_view to_string(Blame b);

struct SimResult {
  double min_ttc = 10.0;
  bool collided = false;
  Blame blame = Blame::none;
  std::optional<int> collision_frame;
  std::optional<int> collision_partner;
  std::vector<TrackPoint> trace;  // ego trajectory, one point per step
  std::vector<double> ttc_series;
  int lane_changes = 0;
};

/// Slices the scenario so it begins at the scene of peak complexity. Throws
/// TooShortError when fewer than min_length_s of scenes remain.
Scenario start_at_peak_complexity(const Scenario& scenario, const ComplexityScore& score,
                                  const SimParams& p = {});

struct Perception {
  RoiMembership roi;
  std::map<int, VehicleState> states;  // ROI members
};

struct ControlCommand {
  double accel = 0.0;
  Side lane_change = Side::none;
};

/// AEB first, then ACC (speed and gap laws), then the lane-change request.
/// `lane_change_active` suppresses new lane-change requests.
ControlCommand ego_controller_step(const VehicleState& ego, const Perception& perception,
                                   const Road& road, const ControllerConfig& cfg,
                                   bool lane_change_active = false,
                                   const RoiParams& roi = {});

/// Footprints at the colliding step and the step before.
struct CollisionGeometry {
  Box ego_before;
  Box other_before;
  Box ego_now;
  Box other_now;
  bool ego_changing_lane = false;
};

/// Requires a collision. Rear-end strikes on an in-lane ego are the other
/// vehicle's fault; everything else is attributed to the ego.
Blame attribute_accident(const CollisionGeometry& g);

/// Closed-loop replay with open-loop participants. Set speed <= 0 holds the
/// recorded speed at the first frame.
SimResult run_replay(const Scenario& scenario, const ControllerConfig& cfg,
                     const PipelineConfig& pipeline = {});

}  // namespace scenkit
