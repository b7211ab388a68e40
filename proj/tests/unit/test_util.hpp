#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "scenkit/core_model.hpp"
#include "scenkit/highd_ingest.hpp"

namespace scenkit::testing {

/// Three lanes on the lower carriageway of a standard test recording.
inline RecordingMeta three_lane_meta(int recording_id = 1) {
  RecordingMeta m;
  m.recording_id = recording_id;
  m.frame_rate = 25.0;
  m.lane_markings_upper = {8.0, 11.75, 15.5, 19.25};
  m.lane_markings_lower = {21.25, 25.0, 28.75, 32.5};
  return m;
}

inline Road three_lane_road() { return three_lane_meta().road(Carriageway::lower); }

struct StraightSpec {
  int id = 1;
  int lane_index = 1;
  double x0 = 0.0;
  double vx = 25.0;
  double ax = 0.0;
  int first_frame = 1;
  int frames = 100;
  VehicleClass cls = VehicleClass::car;
  double length = 4.5;
  double width = 1.9;
};

/// Normalized, lane-centred track with constant acceleration.
inline Track straight_track(const Road& road, const StraightSpec& s) {
  Track t;
  t.id = s.id;
  t.vehicle_class = s.cls;
  t.length = s.length;
  t.width = s.width;
  t.carriageway = Carriageway::lower;
  t.normalized = true;
  const Lane& lane = road.lane(s.lane_index);
  for (int k = 0; k < s.frames; ++k) {
    const double time = k * kHighdFrameDt;
    TrackPoint p;
    p.frame = s.first_frame + k;
    p.vx = s.vx + s.ax * time;
    p.x = s.x0 + s.vx * time + 0.5 * s.ax * time * time;
    p.y = lane.center();
    p.ax = s.ax;
    p.lane_id = lane.id;
    t.points.push_back(p);
  }
  return t;
}

inline VehicleState state_at(const Road& road, int id, int lane_index, double x, double vx,
                             double length = 4.5, double width = 1.9,
                             VehicleClass cls = VehicleClass::car) {
  VehicleState v;
  v.id = id;
  v.length = length;
  v.width = width;
  v.vehicle_class = cls;
  v.point.x = x;
  v.point.vx = vx;
  v.point.y = road.lane(lane_index).center();
  v.point.lane_id = road.lane(lane_index).id;
  return v;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("scenkit_test_" + name + "_" + std::to_string(std::random_device{}()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace scenkit::testing
