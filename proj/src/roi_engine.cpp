#include "scenkit/roi_engine.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "scenkit/error.hpp"

namespace scenkit {
namespace {

struct Candidate {
  int id;
  double dx;
  double length;
};

bool nearer(const Candidate& a, const Candidate& b) {
  const double da = std::abs(a.dx);
  const double db = std::abs(b.dx);
  return da != db ? da < db : a.id < b.id;
}

}  // namespace

std::optional<int> RoiMembership::occupant(RoiSlot slot) const {
  for (const auto& [id, s] : members) {
    if (s == slot) return id;
  }
  return std::nullopt;
}

double safety_distance(double speed, double time_gap_s) {
  if (speed < 0.0) throw ArgumentError("safety_distance: negative speed");
  return time_gap_s * speed;
}

double bumper_gap(const VehicleState& rear, const VehicleState& front) {
  return front.rear() - rear.front();
}

double time_gap(const VehicleState& rear, const VehicleState& front, const RoiParams& p) {
  if (!(front.point.x > rear.point.x)) throw ArgumentError("time_gap: front vehicle is not ahead");
  const double v = rear.point.vx;
  if (v < p.standstill_speed) return p.time_gap_cap_s;
  return std::min(std::max(bumper_gap(rear, front), 0.0) / v, p.time_gap_cap_s);
}

RoiMembership assign_roi(const VehicleState& ego, std::span<const VehicleState> others,
                         const Road& road, const RoiParams& p) {
  RoiMembership m;
  m.frame = ego.point.frame;
  const double ego_speed = std::max(ego.point.vx, 0.0);
  m.d_safety_front = std::max(safety_distance(ego_speed, p.time_gap_s), p.min_extent_m);
  m.d_safety_rear = m.d_safety_front;

  // Candidates per relative lane: index 0 = right, 1 = ego lane, 2 = left.
  std::vector<Candidate> lanes[3];
  for (const auto& o : others) {
    if (o.id == ego.id) continue;
    const auto rel = lane_offset(road, ego.point.lane_id, o.point.lane_id);
    if (!rel || std::abs(*rel) > 1) continue;
    const double dx = o.point.x - ego.point.x;
    const double d_rear =
        std::max(safety_distance(std::max(o.point.vx, 0.0), p.time_gap_s), p.min_extent_m);
    if (dx > m.d_safety_front || dx < -d_rear) continue;
    lanes[*rel + 1].push_back({o.id, dx, o.length});
  }

  auto fill = [&](std::vector<Candidate>& ahead, std::vector<Candidate>& behind, RoiSlot first,
                  RoiSlot second, RoiSlot following) {
    std::sort(ahead.begin(), ahead.end(), nearer);
    std::sort(behind.begin(), behind.end(), nearer);
    if (!ahead.empty()) m.members[ahead[0].id] = first;
    if (ahead.size() > 1) m.members[ahead[1].id] = second;
    if (!behind.empty()) m.members[behind[0].id] = following;
  };

  {
    std::vector<Candidate> ahead, behind;
    for (const auto& c : lanes[1]) (c.dx > 0.0 ? ahead : behind).push_back(c);
    fill(ahead, behind, RoiSlot::ego_preceding, RoiSlot::ego_second_preceding,
         RoiSlot::ego_following);
  }
  for (int side = 0; side < 2; ++side) {
    const bool left = side == 1;
    auto& cands = lanes[left ? 2 : 0];
    std::vector<Candidate> alongside, ahead, behind;
    for (const auto& c : cands) {
      if (std::abs(c.dx) <= std::max(ego.length, c.length)) {
        alongside.push_back(c);
      } else {
        (c.dx > 0.0 ? ahead : behind).push_back(c);
      }
    }
    std::sort(alongside.begin(), alongside.end(), nearer);
    if (!alongside.empty()) {
      m.members[alongside[0].id] = left ? RoiSlot::left_alongside : RoiSlot::right_alongside;
      for (std::size_t i = 1; i < alongside.size(); ++i) {
        (alongside[i].dx > 0.0 ? ahead : behind).push_back(alongside[i]);
      }
    }
    fill(ahead, behind, left ? RoiSlot::left_preceding : RoiSlot::right_preceding,
         left ? RoiSlot::left_second_preceding : RoiSlot::right_second_preceding,
         left ? RoiSlot::left_following : RoiSlot::right_following);
  }
  return m;
}

std::vector<VehicleState> vehicles_at(const Recording& recording, const Track& ego, int frame) {
  std::vector<VehicleState> out;
  for (std::size_t idx : recording.index.at(frame)) {
    const Track& t = recording.tracks[idx];
    if (t.id == ego.id || t.carriageway != ego.carriageway) continue;
    if (const TrackPoint* p = t.at(frame)) out.push_back(make_state(t, *p));
  }
  return out;
}

RoiMembership roi_membership(const Recording& recording, int ego_id, int frame,
                             const RoiParams& p) {
  const Track& ego = recording.track(ego_id);
  const TrackPoint* ep = ego.at(frame);
  if (ep == nullptr) {
    throw LookupError(fmt::format("vehicle {} is not present at frame {}", ego_id, frame));
  }
  const auto others = vehicles_at(recording, ego, frame);
  return assign_roi(make_state(ego, *ep), others, recording.road(ego.carriageway), p);
}

}  // namespace scenkit
