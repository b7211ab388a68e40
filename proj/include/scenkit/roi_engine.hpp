#pragma once

#include <map>
#include <span>

#include "scenkit/config.hpp"
#include "scenkit/core_model.hpp"
#include "scenkit/highd_ingest.hpp"

namespace scenkit {

struct RoiMembership {
  int frame = 0;
  std::map<int, RoiSlot> members;
  double d_safety_front = 0.0;
  double d_safety_rear = 0.0;  // nominal, from the ego speed; members use their own speed

  std::optional<int> occupant(RoiSlot slot) const;
};

/// Safety distance for a time gap of `time_gap_s` (1.8 s by default).
double safety_distance(double speed, double time_gap_s = RoiParams{}.time_gap_s);

/// Bumper-to-bumper gap divided by the rear vehicle's speed; capped when the
/// rear vehicle is (nearly) standing. Throws ArgumentError if front is not ahead.
double time_gap(const VehicleState& rear, const VehicleState& front, const RoiParams& p = {});

/// Bumper gap, negative when the footprints overlap longitudinally.
double bumper_gap(const VehicleState& rear, const VehicleState& front);

/// Slot assignment of `others` around `ego` on `road`.
RoiMembership assign_roi(const VehicleState& ego, std::span<const VehicleState> others,
                         const Road& road, const RoiParams& p = {});

/// ROI of `ego_id` at `frame` among same-carriageway vehicles of a recording.
/// Throws LookupError when the ego is absent at that frame.
RoiMembership roi_membership(const Recording& recording, int ego_id, int frame,
                             const RoiParams& p = {});

/// Same-carriageway vehicles present at `frame` other than `ego_id`.
std::vector<VehicleState> vehicles_at(const Recording& recording, const Track& ego, int frame);

}  // namespace scenkit
