#include "scenkit/replay_simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "scenkit/criticality_metrics.hpp"
#include "scenkit/error.hpp"

namespace scenkit {
namespace {

const VehicleState* slot_state(const Perception& p, RoiSlot slot) {
  const auto id = p.roi.occupant(slot);
  if (!id) return nullptr;
  auto it = p.states.find(*id);
  return it == p.states.end() ? nullptr : &it->second;
}

bool gap_at_least(const VehicleState& rear, const VehicleState& front, double need,
                  const RoiParams& roi) {
  if (!(front.point.x > rear.point.x)) return false;
  return time_gap(rear, front, roi) >= need;
}

bool lateral_overlap(const Box& a, const Box& b) {
  return a.y_min < b.y_max && b.y_min < a.y_max;
}

}  // namespace

std::string_view to_string(Blame b) {
  switch (b) {
    case Blame::none: return "none";
    case Blame::ego: return "ego";
    case Blame::other: return "other";
  }
  return "none";
}

Scenario start_at_peak_complexity(const Scenario& scenario, const ComplexityScore& score,
                                  const SimParams& p) {
  if (score.series.size() != scenario.scenes.size() ||
      score.argmax_index >= scenario.scenes.size()) {
    throw ArgumentError("complexity score does not belong to this scenario");
  }
  const std::size_t k = score.argmax_index;
  const std::size_t remaining = scenario.scenes.size() - k;
  const double length = static_cast<double>(remaining) * scenario.dt;
  if (length < p.min_length_s - 1e-9) {
    throw TooShortError(fmt::format("ego {}: {:.2f} s left after the complexity peak, need {:.2f} s",
                                    scenario.ego_id, length, p.min_length_s));
  }
  if (k == 0) return scenario;

  Scenario out;
  out.recording_id = scenario.recording_id;
  out.ego_id = scenario.ego_id;
  out.dt = scenario.dt;
  out.road = scenario.road;
  out.scenes.assign(scenario.scenes.begin() + static_cast<std::ptrdiff_t>(k),
                    scenario.scenes.end());
  const int first = out.scenes.front().frame;
  const int last = out.scenes.back().frame;
  out.ego = scenario.ego.clipped(first, last);
  for (const auto& scene : out.scenes) {
    for (const auto& [id, pt] : scene.tp_states) out.participant_ids.insert(id);
  }
  for (const auto& [id, track] : scenario.participants) {
    Track t = track.clipped(first, last);
    if (!t.points.empty()) out.participants.emplace(id, std::move(t));
  }
  out.duration_s = length;
  return out;
}

ControlCommand ego_controller_step(const VehicleState& ego, const Perception& perception,
                                   const Road& road, const ControllerConfig& cfg,
                                   bool lane_change_active, const RoiParams& roi) {
  const double v = ego.point.vx;
  const double set = cfg.set_speed > 0.0 ? cfg.set_speed : v;
  const VehicleState* lead = slot_state(perception, RoiSlot::ego_preceding);

  if (lead != nullptr && ttc(ego, *lead) < cfg.aeb_ttc_trigger) {
    return {cfg.max_decel, Side::none};
  }

  double accel = cfg.speed_gain * (set - v);
  if (lead != nullptr) {
    const double gap = lead->rear() - ego.front();
    const double desired = cfg.standstill_gap + cfg.acc_time_gap * v;
    const double a_gap =
        cfg.gap_gain * (gap - desired) + cfg.relative_speed_gain * (lead->point.vx - v);
    accel = std::min(accel, a_gap);
  }
  ControlCommand cmd{std::clamp(accel, cfg.comfort_decel, cfg.max_accel), Side::none};

  if (lane_change_active || lead == nullptr ||
      !(lead->point.vx < set - cfg.lane_change_speed_margin)) {
    return cmd;
  }
  const auto idx = road.index_of(ego.point.lane_id);
  if (!idx) return cmd;
  for (const bool left : {true, false}) {
    const int target = *idx + (left ? 1 : -1);
    if (target < 0 || target >= road.lane_count()) continue;
    if (slot_state(perception, left ? RoiSlot::left_alongside : RoiSlot::right_alongside)) continue;
    if (const auto* f = slot_state(perception, left ? RoiSlot::left_preceding
                                                    : RoiSlot::right_preceding)) {
      if (!gap_at_least(ego, *f, cfg.lane_change_gap, roi)) continue;
    }
    if (const auto* r = slot_state(perception, left ? RoiSlot::left_following
                                                    : RoiSlot::right_following)) {
      if (!gap_at_least(*r, ego, cfg.lane_change_gap, roi)) continue;
    }
    cmd.lane_change = left ? Side::left : Side::right;
    break;
  }
  return cmd;
}

Blame attribute_accident(const CollisionGeometry& g) {
  if (g.ego_changing_lane) return Blame::ego;
  if (lateral_overlap(g.ego_before, g.other_before)) {
    const double ego_cx = 0.5 * (g.ego_before.x_min + g.ego_before.x_max);
    const double other_cx = 0.5 * (g.other_before.x_min + g.other_before.x_max);
    return other_cx < ego_cx ? Blame::other : Blame::ego;
  }
  return Blame::ego;
}

SimResult run_replay(const Scenario& scenario, const ControllerConfig& cfg_in,
                     const PipelineConfig& pipeline) {
  cfg_in.validate();
  SimResult result;
  result.min_ttc = pipeline.criticality.ttc_cap_s;
  if (scenario.scenes.empty()) return result;

  const double dt = scenario.dt;
  const Road& road = scenario.road;
  const Track& ego_track = scenario.ego;
  const TrackPoint start = scenario.scenes.front().ego_state;

  ControllerConfig cfg = cfg_in;
  if (cfg.set_speed <= 0.0) cfg.set_speed = std::max(start.vx, 0.0);

  double x = start.x, y = start.y, v = std::max(start.vx, 0.0), vy = 0.0, accel = 0.0;
  bool lc_active = false;
  double lc_t = 0.0, lc_y0 = 0.0, lc_y1 = 0.0;
  std::optional<Box> ego_prev;
  std::map<int, Box> others_prev;

  for (const auto& scene : scenario.scenes) {
    const int frame = scene.frame;
    TrackPoint ep{frame, x, y, v, vy, accel, 0.0, road.nearest_lane(y)};
    VehicleState ego{ego_track.id, ep, ego_track.length, ego_track.width, ego_track.vehicle_class};
    result.trace.push_back(ep);

    std::vector<VehicleState> others;
    for (const auto& [id, track] : scenario.participants) {
      if (const TrackPoint* p = track.at(frame)) others.push_back(make_state(track, *p));
    }

    for (const auto& o : others) {
      if (!ego.box().overlaps(o.box())) continue;
      CollisionGeometry g;
      g.ego_now = ego.box();
      g.other_now = o.box();
      g.ego_before = ego_prev.value_or(g.ego_now);
      auto it = others_prev.find(o.id);
      g.other_before = it == others_prev.end() ? g.other_now : it->second;
      g.ego_changing_lane = lc_active;
      result.collided = true;
      result.collision_frame = frame;
      result.collision_partner = o.id;
      result.blame = attribute_accident(g);
      result.min_ttc = 0.0;
      result.ttc_series.push_back(0.0);
      return result;
    }

    Perception perception;
    perception.roi = assign_roi(ego, others, road, pipeline.roi);
    for (const auto& o : others) {
      if (perception.roi.members.contains(o.id)) perception.states.emplace(o.id, o);
    }
    double t = pipeline.criticality.ttc_cap_s;
    if (const auto* lead = slot_state(perception, RoiSlot::ego_preceding)) {
      t = ttc(ego, *lead, pipeline.criticality.ttc_cap_s);
    }
    result.ttc_series.push_back(t);
    result.min_ttc = std::min(result.min_ttc, t);

    const ControlCommand cmd = ego_controller_step(ego, perception, road, cfg, lc_active,
                                                   pipeline.roi);
    if (cmd.lane_change != Side::none && !lc_active) {
      const int idx = *road.index_of(ep.lane_id);
      const int target = idx + (cmd.lane_change == Side::left ? 1 : -1);
      lc_active = true;
      lc_t = 0.0;
      lc_y0 = y;
      lc_y1 = road.lane(target).center();
    }

    ego_prev = ego.box();
    others_prev.clear();
    for (const auto& o : others) others_prev.emplace(o.id, o.box());

    accel = std::clamp(cmd.accel, cfg.max_decel, cfg.max_accel);
    const double v_new = std::max(0.0, v + accel * dt);
    x += 0.5 * (v + v_new) * dt;
    v = v_new;
    if (lc_active) {
      const double T = cfg.lane_change_duration;
      lc_t = std::min(lc_t + dt, T);
      const double y_new =
          lc_y0 + (lc_y1 - lc_y0) * 0.5 * (1.0 - std::cos(std::numbers::pi * lc_t / T));
      vy = (y_new - y) / dt;
      y = y_new;
      if (lc_t >= T) {
        lc_active = false;
        ++result.lane_changes;
      }
    } else {
      const double center = road.lane(*road.index_of(road.nearest_lane(y))).center();
      vy = cfg.lane_keep_gain * (center - y);
      y += vy * dt;
    }
  }
  return result;
}

}  // namespace scenkit
