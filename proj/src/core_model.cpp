#include "scenkit/core_model.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "scenkit/error.hpp"

namespace scenkit {

std::string_view to_string(VehicleClass c) { return c == VehicleClass::truck ? "truck" : "car"; }

std::string_view to_string(Side s) {
  switch (s) {
    case Side::left:
      return "left";
    case Side::right:
      return "right";
    case Side::none:
      break;
  }
  return "none";
}

VehicleClass parse_vehicle_class(std::string_view label) {
  if (label == "Car" || label == "car") return VehicleClass::car;
  if (label == "Truck" || label == "truck") return VehicleClass::truck;
  throw SchemaError(fmt::format("unknown vehicle class '{}'", label));
}

Side parse_side(std::string_view label) {
  if (label == "left") return Side::left;
  if (label == "right") return Side::right;
  if (label == "none") return Side::none;
  throw SchemaError(fmt::format("unknown side '{}'", label));
}

Side opposite(Side s) {
  if (s == Side::left) return Side::right;
  if (s == Side::right) return Side::left;
  return Side::none;
}

const TrackPoint* Track::at(int frame) const {
  if (points.empty()) return nullptr;
  if (frame < points.front().frame || frame > points.back().frame) return nullptr;
  const auto idx = static_cast<std::size_t>(frame - points.front().frame);
  if (idx < points.size() && points[idx].frame == frame) return &points[idx];
  // Frame gaps (rejected by validation, but writable) break the direct index.
  auto it = std::lower_bound(points.begin(), points.end(), frame,
                             [](const TrackPoint& q, int f) { return q.frame < f; });
  return (it != points.end() && it->frame == frame) ? &*it : nullptr;
}

Track Track::clipped(int first, int last) const {
  Track out = *this;
  out.points.clear();
  for (const auto& p : points) {
    if (p.frame >= first && p.frame <= last) out.points.push_back(p);
  }
  return out;
}

double Box::distance(const Box& other) const {
  const double dx = std::max({0.0, other.x_min - x_max, x_min - other.x_max});
  const double dy = std::max({0.0, other.y_min - y_max, y_min - other.y_max});
  return std::hypot(dx, dy);
}

double VehicleState::speed() const { return std::hypot(point.vx, point.vy); }

VehicleState make_state(const Track& track, const TrackPoint& point) {
  return {track.id, point, track.length, track.width, track.vehicle_class};
}

Road::Road(std::vector<Lane> lanes) : lanes_(std::move(lanes)) {
  std::sort(lanes_.begin(), lanes_.end(),
            [](const Lane& a, const Lane& b) { return a.center() < b.center(); });
}

Road Road::from_markings(Carriageway carriageway, std::span<const double> upper_markings,
                         std::span<const double> lower_markings) {
  std::vector<Lane> lanes;
  if (carriageway == Carriageway::upper) {
    for (std::size_t j = 0; j + 1 < upper_markings.size(); ++j) {
      lanes.push_back({static_cast<int>(j) + 2, upper_markings[j], upper_markings[j + 1]});
    }
  } else {
    const int base = static_cast<int>(upper_markings.size()) + 2;
    for (std::size_t j = 0; j + 1 < lower_markings.size(); ++j) {
      lanes.push_back(
          {base + static_cast<int>(j), -lower_markings[j + 1], -lower_markings[j]});
    }
  }
  return Road(std::move(lanes));
}

std::optional<int> Road::index_of(int lane_id) const {
  for (std::size_t i = 0; i < lanes_.size(); ++i) {
    if (lanes_[i].id == lane_id) return static_cast<int>(i);
  }
  return std::nullopt;
}

std::optional<int> Road::lane_at(double y) const {
  for (const auto& lane : lanes_) {
    if (y >= lane.y_right && y < lane.y_left) return lane.id;
  }
  return std::nullopt;
}

int Road::nearest_lane(double y) const {
  if (lanes_.empty()) throw LookupError("road has no lanes");
  if (auto id = lane_at(y)) return *id;
  return y < lanes_.front().y_right ? lanes_.front().id : lanes_.back().id;
}

Road Road::mirrored() const {
  std::vector<Lane> lanes;
  lanes.reserve(lanes_.size());
  for (const auto& lane : lanes_) lanes.push_back({lane.id, -lane.y_left, -lane.y_right});
  return Road(std::move(lanes));
}

std::optional<int> lane_offset(const Road& road, int reference_lane_id, int lane_id) {
  const auto ref = road.index_of(reference_lane_id);
  const auto idx = road.index_of(lane_id);
  if (!ref || !idx) return std::nullopt;
  return *idx - *ref;
}

std::string_view to_string(RoiSlot slot) {
  switch (slot) {
    case RoiSlot::ego_preceding:
      return "ego-preceding";
    case RoiSlot::ego_second_preceding:
      return "ego-second-preceding";
    case RoiSlot::ego_following:
      return "ego-following";
    case RoiSlot::left_preceding:
      return "left-preceding";
    case RoiSlot::left_second_preceding:
      return "left-second-preceding";
    case RoiSlot::left_alongside:
      return "left-alongside";
    case RoiSlot::left_following:
      return "left-following";
    case RoiSlot::right_preceding:
      return "right-preceding";
    case RoiSlot::right_second_preceding:
      return "right-second-preceding";
    case RoiSlot::right_alongside:
      return "right-alongside";
    case RoiSlot::right_following:
      return "right-following";
  }
  return "?";
}

RoiSlot mirror(RoiSlot slot) {
  switch (slot) {
    case RoiSlot::left_preceding:
      return RoiSlot::right_preceding;
    case RoiSlot::left_second_preceding:
      return RoiSlot::right_second_preceding;
    case RoiSlot::left_alongside:
      return RoiSlot::right_alongside;
    case RoiSlot::left_following:
      return RoiSlot::right_following;
    case RoiSlot::right_preceding:
      return RoiSlot::left_preceding;
    case RoiSlot::right_second_preceding:
      return RoiSlot::left_second_preceding;
    case RoiSlot::right_alongside:
      return RoiSlot::left_alongside;
    case RoiSlot::right_following:
      return RoiSlot::left_following;
    default:
      return slot;
  }
}

const Track& Scenario::participant(int id) const {
  auto it = participants.find(id);
  if (it == participants.end()) {
    throw LookupError(fmt::format("vehicle {} is not a participant of ego {}", id, ego_id));
  }
  return it->second;
}

std::optional<std::size_t> Scenario::scene_index(int frame) const {
  if (scenes.empty()) return std::nullopt;
  const long idx = static_cast<long>(frame) - scenes.front().frame;
  if (idx < 0 || idx >= static_cast<long>(scenes.size())) return std::nullopt;
  return static_cast<std::size_t>(idx);
}

int scene_count(double duration_s, double dt) {
  if (!(dt > 0.0)) throw ArgumentError("scene_count: dt must be positive");
  if (duration_s < dt - 1e-9) throw ArgumentError("scene_count: duration shorter than one scene");
  const double m = std::round(duration_s / dt);
  if (std::abs(m * dt - duration_s) > 1e-9) {
    throw ArgumentError(
        fmt::format("scene_count: {} s is not a multiple of dt = {} s", duration_s, dt));
  }
  return static_cast<int>(m);
}

ScenarioWindow scenario_window(const Track& ego,
                               std::span<const std::map<int, RoiSlot>> memberships) {
  ScenarioWindow w;
  w.first_frame = ego.initial_frame();
  w.last_frame = ego.final_frame();
  w.free_driving = std::all_of(memberships.begin(), memberships.end(),
                               [](const auto& m) { return m.empty(); });
  return w;
}

Track mirrored(const Track& track) {
  Track out = track;
  for (auto& p : out.points) {
    p.y = -p.y;
    p.vy = -p.vy;
    p.ay = -p.ay;
  }
  return out;
}

}  // namespace scenkit
