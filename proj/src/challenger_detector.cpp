#include "scenkit/challenger_detector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "scenkit/error.hpp"
#include "scenkit/roi_engine.hpp"

namespace scenkit {
namespace {

// Longitudinal position and speed under the decaying-acceleration law.
std::pair<double, double> longitudinal(double x0, double v0, double a0, double t, double T) {
  v0 = std::max(v0, 0.0);
  auto speed = [&](double s) { return v0 + a0 * (s - s * s / (2.0 * T)); };
  auto pos = [&](double s) { return x0 + v0 * s + a0 * (s * s / 2.0 - s * s * s / (6.0 * T)); };

  double t_stop = std::numeric_limits<double>::infinity();
  if (a0 < 0.0) {
    const double r = -v0 / a0;
    if (r <= T / 2.0) t_stop = T * (1.0 - std::sqrt(std::max(0.0, 1.0 - 2.0 * r / T)));
  }
  if (t >= t_stop) return {pos(t_stop), 0.0};
  if (t <= T) return {pos(t), std::max(speed(t), 0.0)};
  const double vT = std::max(speed(T), 0.0);
  return {pos(T) + vT * (t - T), vT};
}

struct Conflict {
  ConflictType type;
  double min_gap;
};

std::optional<Conflict> test_pair(const PredictedPath& ego_path, const VehicleState& ego,
                                  const PredictedPath& tp_path, const VehicleState& tp,
                                  const Road& road, const ChallengerParams& p,
                                  const RoiParams& roi) {
  std::optional<ConflictType> type;
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < ego_path.samples.size(); ++k) {
    const auto& es = ego_path.samples[k];
    const auto& ts = tp_path.samples[k];
    VehicleState e = ego;
    e.point.x = es.x;
    e.point.y = es.y;
    e.point.vx = es.vx;
    VehicleState o = tp;
    o.point.x = ts.x;
    o.point.y = ts.y;
    o.point.vx = ts.vx;
    min_gap = std::min(min_gap, e.box().distance(o.box()));
    if (type) continue;
    if (e.box().overlaps(o.box())) {
      type = ConflictType::path_overlap;
      continue;
    }
    const auto el = road.lane_at(es.y);
    const auto tl = road.lane_at(ts.y);
    if (el && tl && *el == *tl && ts.x > es.x && time_gap(e, o, roi) < p.sub_safety_gap_s) {
      type = ConflictType::sub_safety_gap;
    }
  }
  if (!type) return std::nullopt;
  return Conflict{*type, min_gap};
}

}  // namespace

PathSample predict_state(const TrackPoint& s, double t, const ChallengerParams& p) {
  const auto [x, vx] = longitudinal(s.x, s.vx, s.ax, t, p.accel_decay_s);
  const double Tl = p.lateral_decay_s;
  const double tl = std::min(t, Tl);
  const double y = s.y + s.vy * (tl - tl * tl / (2.0 * Tl));
  return {t, x, y, vx};
}

PredictedPath predict_trajectory(const TrackPoint& state, double horizon_s,
                                 const ChallengerParams& p) {
  if (!(horizon_s > 0.0)) throw ArgumentError("predict_trajectory: horizon must be positive");
  PredictedPath path;
  path.origin_frame = state.frame;
  path.horizon_s = horizon_s;
  const int steps = static_cast<int>(std::floor(horizon_s / p.step_s + 1e-9));
  path.samples.reserve(static_cast<std::size_t>(steps) + 1);
  for (int k = 0; k <= steps; ++k) path.samples.push_back(predict_state(state, k * p.step_s, p));
  return path;
}

std::string_view to_string(ConflictType c) {
  return c == ConflictType::path_overlap ? "path-overlap" : "sub-safety-gap";
}

ConflictType parse_conflict_type(std::string_view label) {
  if (label == "path-overlap") return ConflictType::path_overlap;
  if (label == "sub-safety-gap") return ConflictType::sub_safety_gap;
  throw SchemaError(fmt::format("unknown conflict type '{}'", label));
}

std::vector<ChallengerEvent> detect_challengers(const Scenario& scenario,
                                                const ChallengerParams& p,
                                                const RoiParams& roi) {
  std::vector<ChallengerEvent> events;
  std::set<int> done;
  for (const auto& scene : scenario.scenes) {
    if (scene.tp_states.empty()) continue;
    const VehicleState ego = make_state(scenario.ego, scene.ego_state);
    const PredictedPath ego_path = predict_trajectory(scene.ego_state, p.horizon_s, p);
    for (const auto& [id, point] : scene.tp_states) {
      if (done.contains(id)) continue;
      const VehicleState tp = make_state(scenario.participant(id), point);
      const PredictedPath tp_path = predict_trajectory(point, p.horizon_s, p);
      if (auto c = test_pair(ego_path, ego, tp_path, tp, scenario.road, p, roi)) {
        events.push_back({id, scene.frame, c->type, c->min_gap});
        done.insert(id);
      }
    }
  }
  std::sort(events.begin(), events.end(), [](const auto& a, const auto& b) {
    return a.onset_frame != b.onset_frame ? a.onset_frame < b.onset_frame : a.tp_id < b.tp_id;
  });
  return events;
}

std::optional<ChallengerEvent> first_challenger(std::span<const ChallengerEvent> events) {
  if (events.empty()) return std::nullopt;
  return *std::min_element(events.begin(), events.end(), [](const auto& a, const auto& b) {
    return a.onset_frame != b.onset_frame ? a.onset_frame < b.onset_frame : a.tp_id < b.tp_id;
  });
}

}  // namespace scenkit
