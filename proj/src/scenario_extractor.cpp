#include "scenkit/scenario_extractor.hpp"

#include "scenkit/parallel.hpp"
#include "scenkit/roi_engine.hpp"

namespace scenkit {

Scenario build_scenario(const Recording& recording, const Track& ego, const RoiParams& p) {
  Scenario s;
  s.recording_id = recording.meta.recording_id;
  s.ego_id = ego.id;
  s.dt = recording.meta.dt();
  s.road = recording.road(ego.carriageway);
  s.ego = ego;
  s.scenes.reserve(ego.points.size());

  for (const auto& ep : ego.points) {
    const auto others = vehicles_at(recording, ego, ep.frame);
    const RoiMembership roi = assign_roi(make_state(ego, ep), others, s.road, p);
    Scene scene;
    scene.frame = ep.frame;
    scene.ego_state = ep;
    for (const auto& [id, slot] : roi.members) {
      scene.roi_slots[slot] = id;
      for (const auto& o : others) {
        if (o.id == id) scene.tp_states[id] = o.point;
      }
      s.participant_ids.insert(id);
    }
    s.scenes.push_back(std::move(scene));
  }

  for (int id : s.participant_ids) {
    s.participants[id] = recording.track(id).clipped(ego.initial_frame(), ego.final_frame());
  }
  s.duration_s = static_cast<double>(s.scenes.size()) * s.dt;
  return s;
}

std::vector<Scenario> extract_scenarios(const Recording& recording, const RoiParams& p,
                                        ExtractionStats* stats) {
  auto candidates = parallel_map(recording.tracks.size(), [&](std::size_t i) {
    return build_scenario(recording, recording.tracks[i], p);
  });
  std::vector<Scenario> out;
  for (auto& s : candidates) {
    if (!s.participant_ids.empty()) out.push_back(std::move(s));
  }
  if (stats != nullptr) {
    stats->total_vehicles = static_cast<int>(recording.tracks.size());
    stats->scenarios_after_free_driving_filter = static_cast<int>(out.size());
  }
  return out;
}

int vehicles_per_scenario(const Scenario& scenario) {
  return static_cast<int>(scenario.participant_ids.size()) + 1;
}

}  // namespace scenkit
