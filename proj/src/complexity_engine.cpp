#include "scenkit/complexity_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "scenkit/challenger_detector.hpp"
#include "scenkit/criticality_metrics.hpp"
#include "scenkit/error.hpp"
#include "scenkit/maneuver_classifier.hpp"
#include "scenkit/roi_engine.hpp"

namespace scenkit {
namespace {

double clamp01(double v) {
  if (!std::isfinite(v)) return v > 0.0 ? 1.0 : 0.0;
  return std::clamp(v, 0.0, 1.0);
}

// Time gap that treats a vehicle that is not strictly ahead as a blocked gap.
double gap_or_zero(const VehicleState& rear, const VehicleState& front, const RoiParams& p) {
  if (!(front.point.x > rear.point.x)) return 0.0;
  return time_gap(rear, front, p);
}

int braking_onsets(const Track& t, double threshold) {
  int n = 0;
  for (std::size_t i = 1; i < t.points.size(); ++i) {
    if (t.points[i - 1].ax >= threshold && t.points[i].ax < threshold) ++n;
  }
  return n;
}

// Number of blocked actions among {left change, right change, accelerate}, / 3.
double action_restriction(const VehicleState& viewer, const RoiMembership& roi,
                          const std::map<int, VehicleState>& states, const Road& road,
                          const PipelineConfig& cfg) {
  const double need = cfg.complexity.freedom_gap_s;
  auto state = [&](RoiSlot s) -> const VehicleState* {
    const auto id = roi.occupant(s);
    if (!id) return nullptr;
    auto it = states.find(*id);
    return it == states.end() ? nullptr : &it->second;
  };
  const auto idx = road.index_of(viewer.point.lane_id);
  auto side_free = [&](bool left) {
    if (!idx) return false;
    const int target = *idx + (left ? 1 : -1);
    if (target < 0 || target >= road.lane_count()) return false;
    if (state(left ? RoiSlot::left_alongside : RoiSlot::right_alongside)) return false;
    if (auto* f = state(left ? RoiSlot::left_preceding : RoiSlot::right_preceding)) {
      if (gap_or_zero(viewer, *f, cfg.roi) < need) return false;
    }
    if (auto* r = state(left ? RoiSlot::left_following : RoiSlot::right_following)) {
      if (gap_or_zero(*r, viewer, cfg.roi) < need) return false;
    }
    return true;
  };
  int free_actions = 0;
  if (side_free(true)) ++free_actions;
  if (side_free(false)) ++free_actions;
  const VehicleState* lead = state(RoiSlot::ego_preceding);
  if (lead == nullptr || gap_or_zero(viewer, *lead, cfg.roi) >= need) ++free_actions;
  return (3.0 - free_actions) / 3.0;
}

Box roi_box(const VehicleState& ego, const Road& road, double d_front) {
  Box b{ego.point.x - d_front, ego.point.x + d_front, 0.0, 0.0};
  const int n = road.lane_count();
  if (n == 0) {
    b.y_min = ego.point.y;
    b.y_max = ego.point.y;
    return b;
  }
  const int idx = road.index_of(ego.point.lane_id).value_or(
      *road.index_of(road.nearest_lane(ego.point.y)));
  b.y_min = road.lane(std::max(0, idx - 1)).y_right;
  b.y_max = road.lane(std::min(n - 1, idx + 1)).y_left;
  return b;
}

// Ray parameter interval [t0, t1] inside an axis-aligned box, or empty.
bool slab(double ox, double oy, double dx, double dy, const Box& b, double& t0, double& t1) {
  const double tx1 = (b.x_min - ox) / dx;
  const double tx2 = (b.x_max - ox) / dx;
  const double ty1 = (b.y_min - oy) / dy;
  const double ty2 = (b.y_max - oy) / dy;
  t0 = std::max(std::min(tx1, tx2), std::min(ty1, ty2));
  t1 = std::min(std::max(tx1, tx2), std::max(ty1, ty2));
  return t1 >= t0;
}

}  // namespace

std::string_view to_string(ComplexityClass c) {
  switch (c) {
    case ComplexityClass::low: return "low";
    case ComplexityClass::medium: return "medium";
    case ComplexityClass::high: return "high";
  }
  return "low";
}

WeightVector default_weights() { return ComplexityParams{}.weights; }

void validate_weights(const WeightVector& w) {
  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!(w[i] >= 0.0) || !std::isfinite(w[i])) {
      throw ConfigError(fmt::format("weight w{} = {} is not a non-negative number", i + 1, w[i]));
    }
    sum += w[i];
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw ConfigError(fmt::format("weights sum to {:.15g}, expected 1", sum));
  }
}

double occluded_fraction(double ox, double oy, const Box& roi, std::span<const Box> obstacles,
                         int rays) {
  if (rays < 2 || rays % 2 != 0) throw ArgumentError("occlusion ray count must be even");
  const int pairs = rays / 2;
  const double step = 360.0 / rays;
  int hits = 0;
  auto cast = [&](double dx, double dy) {
    double r0 = 0.0, r1 = 0.0;
    if (!slab(ox, oy, dx, dy, roi, r0, r1) || r1 < 0.0) return false;
    for (const auto& b : obstacles) {
      double t0 = 0.0, t1 = 0.0;
      if (slab(ox, oy, dx, dy, b, t0, t1) && t1 >= 0.0 && t0 <= r1) return true;
    }
    return false;
  };
  for (int k = 0; k < pairs; ++k) {
    const double deg = (k + 0.5) * step;
    const double rad = deg * std::numbers::pi / 180.0;
    const double c = std::cos(rad);
    const double s = std::sin(rad);
    if (cast(c, s)) ++hits;
    if (cast(c, -s)) ++hits;
  }
  return static_cast<double>(hits) / rays;
}

ScenarioConstants scenario_constants(const Scenario& scenario, const PipelineConfig& cfg) {
  const auto& cp = cfg.complexity;
  ScenarioConstants c;

  double sum = 0.0, sum2 = 0.0;
  long n = 0;
  for (const auto& scene : scenario.scenes) {
    for (const auto& [id, p] : scene.tp_states) {
      const double v = std::hypot(p.vx, p.vy);
      sum += v;
      sum2 += v * v;
      ++n;
    }
  }
  if (n > 0) {
    const double mean = sum / n;
    const double var = std::max(sum2 / n - mean * mean, 0.0);
    c.a4 = clamp01(std::sqrt(var) / cp.speed_std_ref);
  }

  int tp_actions = 0;
  for (const auto& [id, track] : scenario.participants) {
    tp_actions += static_cast<int>(detect_lane_changes(track, scenario.road, cfg.maneuver).size());
    tp_actions += braking_onsets(track, cp.brake_onset_accel);
  }
  c.a11 = clamp01(tp_actions / cp.tp_actions_ref);

  const int ego_actions =
      static_cast<int>(detect_lane_changes(scenario.ego, scenario.road, cfg.maneuver).size()) +
      braking_onsets(scenario.ego, cp.brake_onset_accel);
  c.a13 = clamp01(ego_actions / cp.ego_actions_ref);
  return c;
}

AttributeVector attribute_vector(const Scenario& scenario, std::size_t scene_index,
                                 const PipelineConfig& cfg) {
  return attribute_vector(scenario, scene_index, scenario_constants(scenario, cfg), cfg);
}

AttributeVector attribute_vector(const Scenario& scenario, std::size_t scene_index,
                                 const ScenarioConstants& constants, const PipelineConfig& cfg) {
  if (scene_index >= scenario.scenes.size()) {
    throw ArgumentError(fmt::format("scene index {} out of range", scene_index));
  }
  const auto& cp = cfg.complexity;
  const Scene& scene = scenario.scenes[scene_index];
  const Road& road = scenario.road;
  const VehicleState ego = make_state(scenario.ego, scene.ego_state);

  std::map<int, VehicleState> members;
  for (const auto& [id, p] : scene.tp_states) {
    members.emplace(id, make_state(scenario.participant(id), p));
  }
  const double m = static_cast<double>(members.size());

  AttributeVector out;
  out.frame = scene.frame;
  auto& a = out.a;

  // 1 number of TPs, 2 types, 3 dynamics
  a[0] = clamp01(m / cp.max_members);
  if (!members.empty()) {
    int trucks = 0;
    double dyn = 0.0;
    for (const auto& [id, s] : members) {
      if (s.vehicle_class == VehicleClass::truck) ++trucks;
      const double v = std::hypot(s.point.vx, s.point.vy);
      const double acc = std::hypot(s.point.ax, s.point.ay);
      dyn += 0.5 * (v / cp.speed_ref + acc / cp.accel_ref);
    }
    a[1] = clamp01(trucks / m);
    a[2] = clamp01(dyn / m);
  }

  a[3] = constants.a4;

  // 5 action dependencies: immediate same-lane follower/leader pairs below the gap.
  {
    std::vector<const VehicleState*> all{&ego};
    for (const auto& [id, s] : members) all.push_back(&s);
    int pairs = 0;
    for (const auto* f : all) {
      const VehicleState* leader = nullptr;
      for (const auto* o : all) {
        if (o == f || o->point.lane_id != f->point.lane_id || !(o->point.x > f->point.x)) continue;
        if (leader == nullptr || o->point.x < leader->point.x ||
            (o->point.x == leader->point.x && o->id < leader->id)) {
          leader = o;
        }
      }
      if (leader != nullptr && time_gap(*f, *leader, cfg.roi) < cp.dependency_gap_s) ++pairs;
    }
    a[4] = clamp01(pairs / cp.dependency_ref);
  }

  // 6 predictability
  {
    const int lag = static_cast<int>(std::lround(cp.predictability_lag_s / scenario.dt));
    const int past = scene.frame - lag;
    if (past >= scenario.first_frame() && !members.empty()) {
      double err = 0.0;
      int counted = 0;
      for (const auto& [id, s] : members) {
        const TrackPoint* before = scenario.participant(id).at(past);
        if (before == nullptr) continue;
        const PathSample pred = predict_state(*before, lag * scenario.dt, cfg.challenger);
        err += std::hypot(s.point.x - pred.x, s.point.y - pred.y);
        ++counted;
      }
      if (counted > 0) a[5] = clamp01(err / counted / cp.predictability_ref_m);
    }
  }

  // 7 time gap to the nearest same-lane member ahead
  {
    double gap_min = std::numeric_limits<double>::infinity();
    for (const auto& [id, s] : members) {
      if (s.point.lane_id == ego.point.lane_id && s.point.x > ego.point.x) {
        gap_min = std::min(gap_min, time_gap(ego, s, cfg.roi));
      }
    }
    if (std::isfinite(gap_min)) a[6] = clamp01(1.0 - std::min(gap_min, cp.gap_ref_s) / cp.gap_ref_s);
  }

  // 8 ego action freedom
  RoiMembership ego_roi;
  ego_roi.frame = scene.frame;
  for (const auto& [slot, id] : scene.roi_slots) ego_roi.members[id] = slot;
  a[7] = clamp01(action_restriction(ego, ego_roi, members, road, cfg));

  // 9 TP action freedom, each member seeing the ego and the other participants
  if (!members.empty()) {
    std::vector<VehicleState> present{ego};
    for (const auto& [id, track] : scenario.participants) {
      if (const TrackPoint* p = track.at(scene.frame)) present.push_back(make_state(track, *p));
    }
    std::map<int, VehicleState> by_id;
    for (const auto& s : present) by_id.emplace(s.id, s);
    double sum = 0.0;
    for (const auto& [id, s] : members) {
      const RoiMembership roi = assign_roi(s, present, road, cfg.roi);
      sum += action_restriction(s, roi, by_id, road, cfg);
    }
    a[8] = clamp01(sum / m);
  }

  // 10 occlusion
  if (!members.empty() && road.lane_count() > 0) {
    const double d_front = std::max(safety_distance(std::max(ego.point.vx, 0.0), cfg.roi.time_gap_s),
                                    cfg.roi.min_extent_m);
    std::vector<Box> boxes;
    for (const auto& [id, s] : members) boxes.push_back(s.box());
    a[9] = clamp01(occluded_fraction(ego.front(), ego.point.y, roi_box(ego, road, d_front), boxes,
                                     cp.occlusion_rays));
  }

  a[10] = constants.a11;

  // 12 time to brake against the lead
  if (auto lead_slot = scene.roi_slots.find(RoiSlot::ego_preceding);
      lead_slot != scene.roi_slots.end()) {
    const VehicleState& lead = members.at(lead_slot->second);
    const double t = ttc(ego, lead, cfg.criticality.ttc_cap_s);
    if (t < cfg.criticality.ttc_cap_s) {
      const double closing = std::max(ego.point.vx - lead.point.vx, 0.0);
      const double ttb = t - closing / cp.ttb_decel;
      a[11] = clamp01(1.0 - std::min(std::max(ttb, 0.0), cp.ttb_ref_s) / cp.ttb_ref_s);
    }
  }

  a[12] = constants.a13;
  for (auto& v : a) v = clamp01(v);
  return out;
}

std::vector<AttributeVector> attribute_matrix(const Scenario& scenario, const PipelineConfig& cfg) {
  const ScenarioConstants c = scenario_constants(scenario, cfg);
  std::vector<AttributeVector> out;
  out.reserve(scenario.scenes.size());
  for (std::size_t i = 0; i < scenario.scenes.size(); ++i) {
    out.push_back(attribute_vector(scenario, i, c, cfg));
  }
  return out;
}

ComplexityScore complexity_from_attributes(std::span<const AttributeVector> attributes,
                                           const WeightVector& w) {
  if (attributes.empty()) throw ArgumentError("complexity of an empty scenario");
  ComplexityScore s;
  s.series.reserve(attributes.size());
  double best = -1.0;
  for (std::size_t i = 0; i < attributes.size(); ++i) {
    double dot = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) dot += w[j] * attributes[i].a[j];
    dot = std::clamp(dot, 0.0, 1.0);
    s.series.push_back(dot);
    if (dot > best) {
      best = dot;
      s.argmax_index = i;
      s.argmax_frame = attributes[i].frame;
    }
  }
  s.value = best;
  return s;
}

ComplexityScore scenario_complexity(const Scenario& scenario, const WeightVector& w,
                                    const PipelineConfig& cfg) {
  validate_weights(w);
  if (scenario.scenes.empty()) throw ArgumentError("complexity of an empty scenario");
  const auto attrs = attribute_matrix(scenario, cfg);
  return complexity_from_attributes(attrs, w);
}

ComplexityClass complexity_class(double value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw ArgumentError(fmt::format("complexity {} outside [0, 1]", value));
  }
  if (value < 1.0 / 3.0) return ComplexityClass::low;
  if (value < 2.0 / 3.0) return ComplexityClass::medium;
  return ComplexityClass::high;
}

}  // namespace scenkit
