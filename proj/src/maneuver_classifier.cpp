#include "scenkit/maneuver_classifier.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <fmt/format.h>

#include "scenkit/error.hpp"

namespace scenkit {
namespace {

constexpr std::array<std::string_view, kManeuverCount> kNames = {
    "following",           "approaching",          "falling-behind",
    "overtaking-left",     "overtaking-right",     "being-overtaken-left",
    "being-overtaken-right", "cut-in-left",        "cut-in-right",
    "cut-out-left",        "cut-out-right",        "parallel-driving",
    "lead-braking",
};

Maneuver sided(Side side, Maneuver left, Maneuver right) {
  return side == Side::left ? left : right;
}

}  // namespace

std::string_view to_string(Maneuver m) { return kNames[static_cast<std::size_t>(m)]; }

Maneuver parse_maneuver(std::string_view label) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == label) return static_cast<Maneuver>(i);
  }
  throw SchemaError(fmt::format("unknown maneuver '{}'", label));
}

Maneuver mirror(Maneuver m) {
  switch (m) {
    case Maneuver::overtaking_left: return Maneuver::overtaking_right;
    case Maneuver::overtaking_right: return Maneuver::overtaking_left;
    case Maneuver::being_overtaken_left: return Maneuver::being_overtaken_right;
    case Maneuver::being_overtaken_right: return Maneuver::being_overtaken_left;
    case Maneuver::cut_in_left: return Maneuver::cut_in_right;
    case Maneuver::cut_in_right: return Maneuver::cut_in_left;
    case Maneuver::cut_out_left: return Maneuver::cut_out_right;
    case Maneuver::cut_out_right: return Maneuver::cut_out_left;
    default: return m;
  }
}

std::vector<LaneChange> detect_lane_changes(const Track& track, const Road& road,
                                            const ManeuverParams& p) {
  std::vector<LaneChange> out;
  const auto& pts = track.points;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].lane_id == pts[i - 1].lane_id) continue;
    const auto rel = lane_offset(road, pts[i - 1].lane_id, pts[i].lane_id);
    if (!rel || *rel == 0) continue;
    const double sign = *rel > 0 ? 1.0 : -1.0;
    if (pts[i].vy * sign <= 0.0 && pts[i - 1].vy * sign <= 0.0) continue;

    auto moving = [&](std::size_t k) { return pts[k].vy * sign >= p.lateral_speed; };
    std::size_t lo = i - 1;
    while (lo > 0 && moving(lo - 1)) --lo;
    std::size_t hi = i;
    while (hi + 1 < pts.size() && moving(hi + 1)) ++hi;

    LaneChange lc;
    lc.crossing_frame = pts[i].frame;
    lc.from_lane = pts[i - 1].lane_id;
    lc.to_lane = pts[i].lane_id;
    lc.direction = *rel > 0 ? Side::left : Side::right;
    lc.start_frame = pts[lo].frame;
    lc.end_frame = pts[hi].frame;
    out.push_back(lc);
  }
  return out;
}

Maneuver decide_maneuver(const ManeuverInputs& in, const ManeuverParams& p) {
  if (in.lane_change_label) return *in.lane_change_label;

  if (in.rel_lane == 0) {
    if (in.dx > 0.0) {
      if (in.tp_ax < p.lead_brake_accel) return Maneuver::lead_braking;
      if (in.dv < -p.closing_speed) return Maneuver::approaching;
      if (in.dv > p.opening_speed) return Maneuver::falling_behind;
      return Maneuver::following;
    }
    if (in.dv > p.closing_speed) return Maneuver::approaching;
    if (in.dv < -p.opening_speed) return Maneuver::falling_behind;
    return Maneuver::following;
  }

  const Side side = in.rel_lane > 0 ? Side::left : Side::right;
  if (std::abs(in.rel_lane) == 1 &&
      std::abs(in.dx) <= std::max(in.ego_length, in.tp_length) &&
      std::abs(in.dv) <= p.parallel_speed) {
    return Maneuver::parallel_driving;
  }
  if (in.dv > p.closing_speed) {
    return sided(side, Maneuver::overtaking_left, Maneuver::overtaking_right);
  }
  if (in.dv < -p.opening_speed) {
    return sided(side, Maneuver::being_overtaken_left, Maneuver::being_overtaken_right);
  }
  return Maneuver::following;
}

std::vector<ManeuverSegment> merge_labels(int tp_id, int first_frame,
                                          const std::vector<Maneuver>& labels, double dt,
                                          const ManeuverParams& p) {
  std::vector<ManeuverSegment> segs;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int frame = first_frame + static_cast<int>(i);
    if (!segs.empty() && segs.back().maneuver == labels[i]) {
      segs.back().end_frame = frame;
    } else {
      segs.push_back({tp_id, labels[i], frame, frame});
    }
  }

  auto frames = [](const ManeuverSegment& s) { return s.end_frame - s.start_frame + 1; };
  const double min_frames = p.min_segment_s / dt - 1e-9;
  while (segs.size() > 1) {
    std::size_t shortest = segs.size();
    for (std::size_t i = 0; i < segs.size(); ++i) {
      if (frames(segs[i]) >= min_frames) continue;
      if (shortest == segs.size() || frames(segs[i]) < frames(segs[shortest])) shortest = i;
    }
    if (shortest == segs.size()) break;

    std::size_t into;
    if (shortest == 0) {
      into = 1;
    } else if (shortest + 1 == segs.size()) {
      into = shortest - 1;
    } else {
      into = frames(segs[shortest + 1]) > frames(segs[shortest - 1]) ? shortest + 1
                                                                      : shortest - 1;
    }
    if (into < shortest) {
      segs[into].end_frame = segs[shortest].end_frame;
    } else {
      segs[into].start_frame = segs[shortest].start_frame;
    }
    segs.erase(segs.begin() + static_cast<std::ptrdiff_t>(shortest));

    std::vector<ManeuverSegment> merged;
    for (const auto& s : segs) {
      if (!merged.empty() && merged.back().maneuver == s.maneuver) {
        merged.back().end_frame = s.end_frame;
      } else {
        merged.push_back(s);
      }
    }
    segs = std::move(merged);
  }
  return segs;
}

std::vector<std::pair<int, Maneuver>> frame_maneuvers(const Scenario& scenario, int tp_id,
                                                      const ManeuverParams& p) {
  const Track& tp = scenario.participant(tp_id);
  const Track& ego = scenario.ego;

  // Lane-change labels keyed by frame.
  std::map<int, Maneuver> lc_labels;
  for (const auto& lc : detect_lane_changes(tp, scenario.road, p)) {
    const TrackPoint* ep = ego.at(lc.crossing_frame);
    if (ep == nullptr) continue;
    const auto from = lane_offset(scenario.road, ep->lane_id, lc.from_lane);
    const auto to = lane_offset(scenario.road, ep->lane_id, lc.to_lane);
    if (!from || !to) continue;
    std::optional<Maneuver> label;
    if (*to == 0 && std::abs(*from) == 1) {
      label = *from > 0 ? Maneuver::cut_in_left : Maneuver::cut_in_right;
    } else if (*from == 0 && std::abs(*to) == 1) {
      label = *to > 0 ? Maneuver::cut_out_left : Maneuver::cut_out_right;
    }
    if (!label) continue;
    for (int f = lc.start_frame; f <= lc.end_frame; ++f) lc_labels[f] = *label;
  }

  std::vector<std::pair<int, Maneuver>> out;
  out.reserve(tp.points.size());
  for (const auto& tpp : tp.points) {
    const TrackPoint* ep = ego.at(tpp.frame);
    if (ep == nullptr) continue;
    ManeuverInputs in;
    in.rel_lane = lane_offset(scenario.road, ep->lane_id, tpp.lane_id).value_or(0);
    in.dx = tpp.x - ep->x;
    in.dv = tpp.vx - ep->vx;
    in.tp_ax = tpp.ax;
    in.ego_length = ego.length;
    in.tp_length = tp.length;
    if (auto it = lc_labels.find(tpp.frame); it != lc_labels.end()) {
      in.lane_change_label = it->second;
    }
    out.emplace_back(tpp.frame, decide_maneuver(in, p));
  }
  return out;
}

std::vector<ManeuverSegment> classify_maneuvers(const Scenario& scenario, int tp_id,
                                                const ManeuverParams& p) {
  if (!scenario.participant_ids.contains(tp_id)) {
    throw LookupError(fmt::format("vehicle {} is not a participant of ego {}", tp_id,
                                  scenario.ego_id));
  }
  const auto labelled = frame_maneuvers(scenario, tp_id, p);
  if (labelled.empty()) return {};
  std::vector<Maneuver> labels;
  labels.reserve(labelled.size());
  for (const auto& [frame, m] : labelled) labels.push_back(m);
  return merge_labels(tp_id, labelled.front().first, labels, scenario.dt, p);
}

std::optional<Maneuver> label_at(const std::vector<ManeuverSegment>& segments, int frame) {
  for (const auto& s : segments) {
    if (frame >= s.start_frame && frame <= s.end_frame) return s.maneuver;
  }
  return std::nullopt;
}

}  // namespace scenkit
