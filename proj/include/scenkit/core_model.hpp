#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace scenkit {

/// highD frame period (25 Hz drone footage).
inline constexpr double kHighdFrameDt = 0.04;

enum class VehicleClass { car, truck };

/// Carriageway of a highD recording. Upper lanes drive toward -x in image
/// coordinates, lower lanes toward +x.
enum class Carriageway { upper, lower };

/// Lateral side in the driving direction.
enum class Side { none, left, right };

std::string_view to_string(VehicleClass c);
std::string_view to_string(Side s);
VehicleClass parse_vehicle_class(std::string_view label);
Side parse_side(std::string_view label);
Side opposite(Side s);

/// One sample of a track. After normalization x grows along the travel
/// direction and y grows to the driver's left.
struct TrackPoint {
  int frame = 0;
  double x = 0.0;
  double y = 0.0;
  double vx = 0.0;
  double vy = 0.0;
  double ax = 0.0;
  double ay = 0.0;
  int lane_id = 0;
};

struct Track {
  int id = 0;
  VehicleClass vehicle_class = VehicleClass::car;
  double length = 0.0;
  double width = 0.0;
  Carriageway carriageway = Carriageway::lower;
  bool normalized = false;
  std::vector<TrackPoint> points;

  int initial_frame() const { return points.empty() ? 0 : points.front().frame; }
  int final_frame() const { return points.empty() ? -1 : points.back().frame; }
  bool present(int frame) const { return at(frame) != nullptr; }
  /// Point at `frame`, or nullptr outside the track.
  const TrackPoint* at(int frame) const;
  /// Copy restricted to [first, last].
  Track clipped(int first, int last) const;
};

/// Axis-aligned vehicle footprint in normalized coordinates.
struct Box {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;

  bool overlaps(const Box& other) const {
    return x_min < other.x_max && other.x_min < x_max && y_min < other.y_max &&
           other.y_min < y_max;
  }
  /// Euclidean separation, 0 when overlapping.
  double distance(const Box& other) const;
};

/// A vehicle's state at one instant together with its static footprint.
struct VehicleState {
  int id = 0;
  TrackPoint point;
  double length = 0.0;
  double width = 0.0;
  VehicleClass vehicle_class = VehicleClass::car;

  double front() const { return point.x + 0.5 * length; }
  double rear() const { return point.x - 0.5 * length; }
  double speed() const;
  Box box() const {
    return {rear(), front(), point.y - 0.5 * width, point.y + 0.5 * width};
  }
};

VehicleState make_state(const Track& track, const TrackPoint& point);

struct Lane {
  int id = 0;
  double y_right = 0.0;  // smaller normalized y
  double y_left = 0.0;
  double center() const { return 0.5 * (y_right + y_left); }
};

/// Straight parallel lanes of one carriageway in normalized coordinates,
/// ordered from the rightmost lane (index 0) to the leftmost.
class Road {
 public:
  Road() = default;
  explicit Road(std::vector<Lane> lanes);

  /// Builds the road of a carriageway from highD image-space marking offsets
  /// (ascending y). Lane ids follow the highD numbering.
  static Road from_markings(Carriageway carriageway, std::span<const double> upper_markings,
                            std::span<const double> lower_markings);

  int lane_count() const { return static_cast<int>(lanes_.size()); }
  const std::vector<Lane>& lanes() const { return lanes_; }
  const Lane& lane(int index) const { return lanes_.at(static_cast<std::size_t>(index)); }
  std::optional<int> index_of(int lane_id) const;
  /// Lane id enclosing y. Outside the road: nullopt.
  std::optional<int> lane_at(double y) const;
  /// Lane id enclosing y, or the nearest edge lane when outside.
  int nearest_lane(double y) const;
  bool contains_lane(int lane_id) const { return index_of(lane_id).has_value(); }
  double y_right_edge() const { return lanes_.empty() ? 0.0 : lanes_.front().y_right; }
  double y_left_edge() const { return lanes_.empty() ? 0.0 : lanes_.back().y_left; }
  /// Lateral mirror about y = 0: lane order reverses, ids are kept.
  Road mirrored() const;

 private:
  std::vector<Lane> lanes_;
};

/// Signed lane offset of `lane_id` relative to `reference_lane_id`
/// (+1 = one lane to the left). nullopt if either lane is unknown.
std::optional<int> lane_offset(const Road& road, int reference_lane_id, int lane_id);

enum class RoiSlot {
  ego_preceding,
  ego_second_preceding,
  ego_following,
  left_preceding,
  left_second_preceding,
  left_alongside,
  left_following,
  right_preceding,
  right_second_preceding,
  right_alongside,
  right_following,
};
inline constexpr int kRoiSlotCount = 11;
std::string_view to_string(RoiSlot slot);
RoiSlot mirror(RoiSlot slot);

struct Scene {
  int frame = 0;
  TrackPoint ego_state;
  std::map<int, TrackPoint> tp_states;  // ROI members only
  std::map<RoiSlot, int> roi_slots;
};

/// An ego joined with every traffic participant that enters its ROI, over the
/// ego's full presence window.
struct Scenario {
  int recording_id = 0;
  int ego_id = 0;
  double dt = kHighdFrameDt;
  Road road;
  Track ego;
  std::map<int, Track> participants;  // full histories clipped to the window
  std::vector<Scene> scenes;
  std::set<int> participant_ids;
  double duration_s = 0.0;

  int first_frame() const { return scenes.empty() ? 0 : scenes.front().frame; }
  int last_frame() const { return scenes.empty() ? -1 : scenes.back().frame; }
  const Track& participant(int id) const;
  /// Scene index of `frame`, or nullopt outside the window.
  std::optional<std::size_t> scene_index(int frame) const;
};

/// Number of scenes for a duration, m = t / dt.
int scene_count(double duration_s, double dt);

struct ScenarioWindow {
  int first_frame = 0;
  int last_frame = -1;
  bool free_driving = true;
};

/// Presence window of the ego; free driving when every membership is empty.
ScenarioWindow scenario_window(const Track& ego,
                               std::span<const std::map<int, RoiSlot>> memberships);

/// Lateral mirror of a normalized track (y, vy, ay negated).
Track mirrored(const Track& track);

}  // namespace scenkit
