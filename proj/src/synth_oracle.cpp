#include "scenkit/synth_oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "scenkit/error.hpp"

namespace scenkit {
namespace {

using json = nlohmann::ordered_json;

constexpr double kDt = kHighdFrameDt;
constexpr double kLaneWidth = 3.75;
constexpr double kManeuverStart = 6.0;    // s into the slot
constexpr double kLaneChangeTime = 4.0;   // lateral sinusoid duration
constexpr int kSlotGapFrames = 50;
constexpr int kManifestVersion = 1;

constexpr std::array<std::string_view, kTemplateCount> kTemplateNames = {
    "free-driving", "platoon",         "cut-in",         "cut-out",         "braking-lead",
    "overtake",     "rear-approach",  "ego-lane-change", "alongside-drift",
};

constexpr std::array<Template, 6> kChallengerTemplates = {
    Template::braking_lead, Template::cut_in,          Template::cut_out,
    Template::alongside_drift, Template::rear_approach, Template::ego_lane_change,
};

struct Tier {
  double lo;
  double hi;
};
constexpr std::array<Tier, 3> kTiers = {{{0.0, 0.2}, {0.4, 0.6}, {0.8, 1.0}}};

bool needs_side_lane(Template t) {
  switch (t) {
    case Template::cut_in:
    case Template::cut_out:
    case Template::overtake:
    case Template::ego_lane_change:
    case Template::alongside_drift:
      return true;
    default:
      return false;
  }
}

struct AccelPhase {
  double t0;
  double t1;
  double a;
};

struct LateralPhase {
  bool sinusoid = true;
  double t0 = 0.0;
  double dy = 0.0;  // sinusoid: signed lateral displacement over kLaneChangeTime
  double vd = 0.0;  // drift: signed plateau speed
  double plateau = 0.0;
};
constexpr double kDriftRampUp = 0.3;
constexpr double kDriftRampDown = 0.5;

struct ScriptedLaneChange {
  double t0;
  int from;  // lane index
  int to;
};

struct Actor {
  int id = 0;
  VehicleClass cls = VehicleClass::car;
  double length = 4.5;
  double width = 1.9;
  double x0 = 0.0;  // relative to the ego start
  double v0 = 0.0;
  int lane0 = 0;
  bool background = false;
  std::vector<AccelPhase> accel;
  std::vector<LateralPhase> lateral;
  std::vector<ScriptedLaneChange> lane_changes;

  double ax(double t) const {
    double a = 0.0;
    for (const auto& p : accel) {
      if (t >= p.t0 && t < p.t1) a += p.a;
    }
    return a;
  }
  double vx(double t) const {
    double v = v0;
    for (const auto& p : accel) v += p.a * (std::clamp(t, p.t0, p.t1) - p.t0);
    return std::max(v, 0.0);
  }
  std::pair<double, double> lat(double t) const {
    double vy = 0.0, ay = 0.0;
    for (const auto& p : lateral) {
      const double s = t - p.t0;
      if (p.sinusoid) {
        if (s < 0.0 || s > kLaneChangeTime) continue;
        const double w = std::numbers::pi / kLaneChangeTime;
        vy += 0.5 * p.dy * w * std::sin(w * s);
        ay += 0.5 * p.dy * w * w * std::cos(w * s);
      } else {
        const double up = kDriftRampUp, flat = p.plateau, down = kDriftRampDown;
        if (s < 0.0 || s > up + flat + down) continue;
        if (s < up) {
          vy += p.vd * s / up;
          ay += p.vd / up;
        } else if (s < up + flat) {
          vy += p.vd;
        } else {
          vy += p.vd * (1.0 - (s - up - flat) / down);
          ay -= p.vd / down;
        }
      }
    }
    return {vy, ay};
  }
  int lane_at(double t) const {
    int lane = lane0;
    for (const auto& lc : lane_changes) {
      if (t >= lc.t0 + 0.5 * kLaneChangeTime) lane = lc.to;
    }
    return lane;
  }
  // Lane-change window containing t, if any.
  const ScriptedLaneChange* changing_at(double t) const {
    for (const auto& lc : lane_changes) {
      if (t >= lc.t0 && t <= lc.t0 + kLaneChangeTime) return &lc;
    }
    return nullptr;
  }
};

double round2(double v) { return std::round(v * 100.0) / 100.0; }

void draw_car(SynthRng& rng, Actor& a) {
  a.cls = VehicleClass::car;
  a.length = round2(rng.uniform(4.3, 4.8));
  a.width = round2(rng.uniform(1.85, 2.0));
}

struct Script {
  std::vector<Actor> actors;  // actors[0] is the ego
  std::string variant;
  std::optional<std::size_t> challenger;  // index into actors
  std::optional<FunctionalClass> functional;
};

// Builds the actors of one spec. Positions are relative to the ego start.
Script build_script(const ScriptSpec& spec, int ego_lane, int side_lane,
                    std::optional<int> other_lane) {
  SynthRng rng(spec.seed);
  const double sev = spec.severity;
  const double ts = kManeuverStart;
  const double dir = spec.side == Side::left ? 1.0 : -1.0;

  Script sc;
  Actor ego;
  ego.v0 = rng.uniform(24.0, 32.0);
  ego.lane0 = ego_lane;
  draw_car(rng, ego);
  const double ve = ego.v0;

  auto new_actor = [&](int lane) {
    Actor a;
    a.lane0 = lane;
    draw_car(rng, a);
    a.v0 = ve;
    return a;
  };
  auto half = [&](const Actor& a) { return 0.5 * (ego.length + a.length); };

  switch (spec.kind) {
    case Template::free_driving:
      break;

    case Template::platoon: {
      const double thw = 1.6 - 0.6 * sev;
      Actor lead = new_actor(ego_lane);
      lead.x0 = thw * ve + half(lead);
      Actor follower = new_actor(ego_lane);
      follower.x0 = -(thw * ve + half(follower));
      sc.actors = {ego, lead, follower};
      break;
    }

    case Template::braking_lead: {
      const double dv = 6.0 + 8.0 * sev;
      const double decel = 3.0 + 4.0 * sev;
      const double thw_end = 0.8 - 0.4 * sev;
      const double g_end = thw_end * (ve - dv);
      const double delay = std::clamp((1.3 * ve - g_end) / dv, 0.5, 3.0);
      Actor lead = new_actor(ego_lane);
      lead.x0 = g_end + dv * delay + half(lead);
      lead.accel.push_back({ts, ts + dv / decel, -decel});
      ego.accel.push_back({ts + delay, ts + delay + dv / decel, -decel});
      sc.actors = {ego, lead};
      sc.challenger = 1;
      sc.functional = FunctionalClass{FunctionalScenario::I, Side::none};
      break;
    }

    case Template::cut_in: {
      const double u = rng.uniform(0.0, 1.0);
      Actor tp = new_actor(side_lane);
      tp.lateral.push_back({true, ts, -dir * kLaneWidth, 0.0, 0.0});
      tp.lane_changes.push_back({ts, side_lane, ego_lane});
      const double t_cross = ts + 0.5 * kLaneChangeTime;
      double dx_ts = 0.0;
      FunctionalScenario cls = FunctionalScenario::III;
      if (u < 1.0 / 3.0) {
        sc.variant = "ahead";
        cls = FunctionalScenario::II;
        const double dv = 1.5 + 3.5 * sev;
        const double g_end = 12.0 - 7.0 * sev;
        const double brake = 3.0;
        tp.v0 = ve - dv;
        dx_ts = g_end + 2.0 * dv + dv * dv / (2.0 * brake) + half(tp);
        ego.accel.push_back({t_cross, t_cross + dv / brake, -brake});
      } else if (u < 2.0 / 3.0) {
        sc.variant = "alongside";
        const double dv = 5.0 - 1.5 * sev;
        tp.v0 = ve + dv;
        dx_ts = rng.uniform(-1.0, 1.0);
        ego.accel.push_back({t_cross, t_cross + 1.0, -2.0});
      } else {
        sc.variant = "behind";
        cls = FunctionalScenario::IV;
        const double dv = 7.0 + 2.0 * sev;
        tp.v0 = ve + dv;
        dx_ts = -6.5 - rng.uniform(0.0, 0.5);
        ego.accel.push_back({t_cross, t_cross + 1.0, -2.0});
      }
      tp.x0 = dx_ts - (tp.v0 - ve) * ts;
      sc.actors = {ego, tp};
      sc.challenger = 1;
      sc.functional = FunctionalClass{cls, spec.side};
      break;
    }

    case Template::cut_out: {
      const double decel = 3.5 + 1.5 * sev;
      Actor lead = new_actor(ego_lane);
      lead.x0 = 1.2 * ve + half(lead);
      lead.lateral.push_back({true, ts, dir * kLaneWidth, 0.0, 0.0});
      lead.lane_changes.push_back({ts, ego_lane, side_lane});
      lead.accel.push_back({ts + 0.5, ts + 3.0, -decel});
      sc.actors = {ego, lead};
      sc.challenger = 1;
      sc.functional = FunctionalClass{FunctionalScenario::V, spec.side};
      break;
    }

    case Template::alongside_drift: {
      Actor tp = new_actor(side_lane);
      tp.x0 = rng.uniform(-2.0, 2.0);
      const double vd = 0.9 + 0.3 * sev;
      const double g_end = 0.12 - 0.07 * sev;
      const double travel = kLaneWidth - 0.5 * (ego.width + tp.width) - g_end;
      const double plateau = travel / vd - 0.5 * (kDriftRampUp + kDriftRampDown);
      LateralPhase drift;
      drift.sinusoid = false;
      drift.t0 = ts;
      drift.vd = -dir * vd;
      drift.plateau = plateau;
      tp.lateral.push_back(drift);
      sc.actors = {ego, tp};
      sc.challenger = 1;
      sc.functional = FunctionalClass{FunctionalScenario::VI, spec.side};
      break;
    }

    case Template::rear_approach: {
      const double dv = 4.0 + 5.0 * sev;
      const double g_end = 8.0 - 5.0 * sev;
      const double brake = 3.0;
      Actor tp = new_actor(ego_lane);
      tp.v0 = ve + dv;
      const double stop_dist = dv * dv / (2.0 * brake);
      const double g0 = std::max(46.0, g_end + stop_dist + dv * ts);
      const double t_brake = (g0 - g_end - stop_dist) / dv;
      tp.x0 = -(g0 + half(tp));
      tp.accel.push_back({t_brake, t_brake + dv / brake, -brake});
      sc.actors = {ego, tp};
      sc.challenger = 1;
      sc.functional = FunctionalClass{FunctionalScenario::VII, Side::none};
      break;
    }

    case Template::ego_lane_change: {
      const double u = rng.uniform(0.0, 1.0);
      ego.lateral.push_back({true, ts, dir * kLaneWidth, 0.0, 0.0});
      ego.lane_changes.push_back({ts, ego_lane, side_lane});
      const double t_cross = ts + 0.5 * kLaneChangeTime;
      Actor tp = new_actor(side_lane);
      FunctionalScenario cls;
      if (u < 0.5) {
        sc.variant = "ahead";
        cls = FunctionalScenario::VIII;
        const double dv = 2.0 + 3.0 * sev;
        const double g_end = 12.0 - 6.0 * sev;
        const double brake = 3.0;
        tp.v0 = ve - dv;
        const double dx_ts = g_end + 2.0 * dv + dv * dv / (2.0 * brake) + half(tp);
        tp.x0 = dx_ts + dv * ts;
        ego.accel.push_back({t_cross, t_cross + dv / brake, -brake});
      } else {
        sc.variant = "behind";
        cls = FunctionalScenario::IX;
        const double dv = 5.0 + 2.0 * sev;
        const double g_end = 10.0 - 6.0 * sev;
        const double brake = 4.0;
        const double t_brake = ts + 2.2;
        tp.v0 = ve + dv;
        const double dx_ts = -(g_end + (t_brake - ts) * dv + dv * dv / (2.0 * brake) + half(tp));
        tp.x0 = dx_ts - dv * ts;
        tp.accel.push_back({t_brake, t_brake + dv / brake, -brake});
      }
      sc.actors = {ego, tp};
      sc.challenger = 1;
      sc.functional = FunctionalClass{cls, spec.side};
      break;
    }

    case Template::overtake: {
      const double dv = 6.0 + 3.0 * sev;
      Actor tp = new_actor(side_lane);
      tp.v0 = ve + dv;
      tp.x0 = -dv * (0.5 * spec.duration_s - 1.0);
      sc.actors = {ego, tp};
      break;
    }
  }
  if (sc.actors.empty()) sc.actors = {ego};

  // Constant-speed background traffic in the lane opposite the maneuver side.
  if (spec.kind != Template::free_driving && other_lane) {
    const int count = static_cast<int>(std::lround(sev * 3.0));
    constexpr std::array<double, 3> offsets = {10.0, -26.0, 50.0};
    for (int k = 0; k < count; ++k) {
      Actor b;
      b.background = true;
      b.lane0 = *other_lane;
      draw_car(rng, b);
      if (k == 2 && sev > 0.75) {
        b.cls = VehicleClass::truck;
        b.length = round2(rng.uniform(12.0, 16.0));
        b.width = 2.5;
      }
      b.v0 = ve;
      b.x0 = offsets[static_cast<std::size_t>(k)];
      sc.actors.push_back(b);
    }
  }
  return sc;
}

struct Sampled {
  Track track;
  std::vector<int> script_lane;  // lane index by construction
};

Sampled sample_actor(const Actor& a, const Road& road, Carriageway cw, double x_base,
                     int first_frame, int frames) {
  Sampled s;
  s.track.id = a.id;
  s.track.vehicle_class = a.cls;
  s.track.length = a.length;
  s.track.width = a.width;
  s.track.carriageway = cw;
  s.track.normalized = true;
  s.track.points.reserve(static_cast<std::size_t>(frames));
  double x = x_base + a.x0;
  double y = road.lane(a.lane0).center();
  double prev_vx = 0.0, prev_vy = 0.0;
  for (int k = 0; k < frames; ++k) {
    const double t = k * kDt;
    const double vx = a.vx(t);
    const auto [vy, ay] = a.lat(t);
    if (k > 0) {
      x += 0.5 * (prev_vx + vx) * kDt;
      y += 0.5 * (prev_vy + vy) * kDt;
    }
    TrackPoint p;
    p.frame = first_frame + k;
    p.x = x;
    p.y = y;
    p.vx = vx;
    p.vy = vy;
    p.ax = a.ax(t);
    p.ay = ay;
    p.lane_id = road.nearest_lane(y);
    s.track.points.push_back(p);
    s.script_lane.push_back(a.lane_at(t));
    prev_vx = vx;
    prev_vy = vy;
  }
  return s;
}

// Construction labels: the decision tree applied to scripted lanes and windows.
std::vector<ManeuverSegment> truth_maneuvers(const Actor& ego, const Sampled& se, const Actor& tp,
                                             const Sampled& st) {
  std::vector<Maneuver> labels;
  const auto& ep = se.track.points;
  const auto& tpp = st.track.points;
  for (std::size_t k = 0; k < ep.size(); ++k) {
    const double t = static_cast<double>(k) * kDt;
    ManeuverInputs in;
    in.rel_lane = st.script_lane[k] - se.script_lane[k];
    in.dx = tpp[k].x - ep[k].x;
    in.dv = tpp[k].vx - ep[k].vx;
    in.tp_ax = tpp[k].ax;
    in.ego_length = ego.length;
    in.tp_length = tp.length;
    if (const ScriptedLaneChange* lc = tp.changing_at(t)) {
      const int ego_lane = ego.lane_at(lc->t0 + 0.5 * kLaneChangeTime);
      const int from = lc->from - ego_lane;
      const int to = lc->to - ego_lane;
      if (to == 0 && std::abs(from) == 1) {
        in.lane_change_label = from > 0 ? Maneuver::cut_in_left : Maneuver::cut_in_right;
      } else if (from == 0 && std::abs(to) == 1) {
        in.lane_change_label = to > 0 ? Maneuver::cut_out_left : Maneuver::cut_out_right;
      }
    }
    labels.push_back(decide_maneuver(in));
  }
  return merge_labels(tp.id, ep.front().frame, labels, kDt);
}

void check_spec(const ScriptSpec& s, std::size_t index) {
  auto fail = [&](const std::string& why) {
    throw SpecError(fmt::format("spec {} ({}): {}", index, to_string(s.kind), why));
  };
  if (s.lane_count < 1 || s.lane_count > 6) fail("lane_count must be in 1..6");
  if (!(s.severity >= 0.0 && s.severity <= 1.0)) fail("severity must be in [0, 1]");
  if (!(s.duration_s >= 12.0 && s.duration_s <= 120.0)) fail("duration_s must be in [12, 120]");
  if (s.side == Side::none && needs_side_lane(s.kind)) fail("side must be left or right");
  if (needs_side_lane(s.kind) && s.lane_count < 2) {
    fail(fmt::format("needs an adjacent lane, lane_count is {}", s.lane_count));
  }
}

std::vector<double> markings(double y0, int lanes) {
  std::vector<double> m;
  for (int j = 0; j <= lanes; ++j) m.push_back(y0 + j * kLaneWidth);
  return m;
}

json segments_json(const std::vector<ManeuverSegment>& segs) {
  json arr = json::array();
  for (const auto& s : segs) {
    arr.push_back({{"maneuver", to_string(s.maneuver)},
                   {"start_frame", s.start_frame},
                   {"end_frame", s.end_frame}});
  }
  return arr;
}

}  // namespace

std::string_view to_string(Template t) { return kTemplateNames[static_cast<std::size_t>(t)]; }

Template parse_template(std::string_view label) {
  for (std::size_t i = 0; i < kTemplateNames.size(); ++i) {
    if (kTemplateNames[i] == label) return static_cast<Template>(i);
  }
  throw SpecError(fmt::format("unknown template '{}'", label));
}

bool has_challenger(Template t) {
  return std::find(kChallengerTemplates.begin(), kChallengerTemplates.end(), t) !=
         kChallengerTemplates.end();
}

SynthRng::SynthRng(std::uint64_t seed) : engine_(seed) {}

double SynthRng::uniform(double a, double b) {
  const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return a + (b - a) * u;
}

SynthRecording generate_recording(std::span<const ScriptSpec> specs, int recording_id) {
  if (specs.empty()) throw SpecError("generate_recording: no specs");
  const int lanes = specs.front().lane_count;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    check_spec(specs[i], i);
    if (specs[i].lane_count != lanes) {
      throw SpecError(fmt::format("spec {}: all specs of a recording share lane_count", i));
    }
  }

  SynthRecording out;
  out.meta.recording_id = recording_id;
  out.meta.frame_rate = 25.0;
  out.meta.speed_limit = std::nullopt;
  out.meta.lane_markings_upper = markings(8.0, lanes);
  out.meta.lane_markings_lower = markings(8.0 + lanes * kLaneWidth + 2.0, lanes);
  out.truth.recording_id = recording_id;

  int next_id = 1;
  int frame = 1;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const ScriptSpec& spec = specs[i];
    const Carriageway cw = i % 2 == 0 ? Carriageway::lower : Carriageway::upper;
    const Road road = out.meta.road(cw);
    const int frames = static_cast<int>(std::lround(spec.duration_s / kDt));

    int ego_lane = 0;
    if (lanes >= 3) {
      ego_lane = lanes / 2;
    } else if (lanes == 2) {
      ego_lane = spec.side == Side::left ? 0 : 1;
    }
    const int side_lane = ego_lane + (spec.side == Side::left ? 1 : -1);
    std::optional<int> other_lane;
    const int opp = ego_lane - (spec.side == Side::left ? 1 : -1);
    if (lanes >= 3 && opp >= 0 && opp < lanes) other_lane = opp;

    Script sc = build_script(spec, ego_lane, side_lane, other_lane);
    for (auto& a : sc.actors) a.id = next_id++;

    const double x_base = cw == Carriageway::lower ? 100.0 : -700.0;
    std::vector<Sampled> sampled;
    for (const auto& a : sc.actors) sampled.push_back(sample_actor(a, road, cw, x_base, frame, frames));

    GtScenario gt;
    gt.spec_index = i;
    gt.spec = spec;
    gt.variant = sc.variant;
    gt.ego_id = sc.actors.front().id;
    gt.carriageway = cw;
    gt.first_frame = frame;
    gt.last_frame = frame + frames - 1;
    if (sc.challenger) gt.challenger_id = sc.actors[*sc.challenger].id;
    gt.functional = sc.functional;
    for (std::size_t k = 0; k < sc.actors.size(); ++k) {
      const Actor& a = sc.actors[k];
      gt.vehicle_ids.push_back(a.id);
      gt.lane_changes[a.id] = static_cast<int>(a.lane_changes.size());
      if (k == 0) continue;
      if (!a.background) gt.scripted_ids.push_back(a.id);
      gt.maneuvers[a.id] = truth_maneuvers(sc.actors[0], sampled[0], a, sampled[k]);
    }
    out.truth.scenarios.push_back(std::move(gt));
    for (auto& s : sampled) out.tracks.push_back(std::move(s.track));
    frame += frames + kSlotGapFrames;
  }
  out.meta.num_vehicles = static_cast<int>(out.tracks.size());
  return out;
}

std::string GroundTruth::to_json() const {
  json root;
  root["recording_id"] = recording_id;
  root["manifest_version"] = kManifestVersion;
  json arr = json::array();
  for (const auto& s : scenarios) {
    json j;
    j["spec_index"] = s.spec_index;
    j["template"] = to_string(s.spec.kind);
    j["side"] = to_string(s.spec.side);
    j["severity"] = s.spec.severity;
    j["seed"] = s.spec.seed;
    j["duration_s"] = s.spec.duration_s;
    j["lane_count"] = s.spec.lane_count;
    j["variant"] = s.variant;
    j["ego_id"] = s.ego_id;
    j["carriageway"] = s.carriageway == Carriageway::upper ? "upper" : "lower";
    j["first_frame"] = s.first_frame;
    j["last_frame"] = s.last_frame;
    j["challenger_id"] = s.challenger_id ? json(*s.challenger_id) : json(nullptr);
    if (s.functional) {
      j["functional_scenario"] = to_string(s.functional->scenario);
      j["functional_side"] = to_string(s.functional->side);
    } else {
      j["functional_scenario"] = nullptr;
      j["functional_side"] = nullptr;
    }
    j["vehicle_ids"] = s.vehicle_ids;
    j["scripted_ids"] = s.scripted_ids;
    json man = json::object();
    for (const auto& [id, segs] : s.maneuvers) man[std::to_string(id)] = segments_json(segs);
    j["maneuvers"] = man;
    json lcs = json::object();
    for (const auto& [id, n] : s.lane_changes) lcs[std::to_string(id)] = n;
    j["lane_changes"] = lcs;
    arr.push_back(std::move(j));
  }
  root["scenarios"] = std::move(arr);
  return root.dump(1) + "\n";
}

GroundTruth GroundTruth::from_json(const std::string& text) {
  GroundTruth gt;
  try {
    const json root = json::parse(text);
    gt.recording_id = root.at("recording_id").get<int>();
    for (const auto& j : root.at("scenarios")) {
      GtScenario s;
      s.spec_index = j.at("spec_index").get<std::size_t>();
      s.spec.kind = parse_template(j.at("template").get<std::string>());
      s.spec.side = parse_side(j.at("side").get<std::string>());
      s.spec.severity = j.at("severity").get<double>();
      s.spec.seed = j.at("seed").get<std::uint64_t>();
      s.spec.duration_s = j.at("duration_s").get<double>();
      s.spec.lane_count = j.at("lane_count").get<int>();
      s.variant = j.at("variant").get<std::string>();
      s.ego_id = j.at("ego_id").get<int>();
      s.carriageway =
          j.at("carriageway").get<std::string>() == "upper" ? Carriageway::upper : Carriageway::lower;
      s.first_frame = j.at("first_frame").get<int>();
      s.last_frame = j.at("last_frame").get<int>();
      if (!j.at("challenger_id").is_null()) s.challenger_id = j.at("challenger_id").get<int>();
      if (!j.at("functional_scenario").is_null()) {
        s.functional = FunctionalClass{
            parse_functional(j.at("functional_scenario").get<std::string>()),
            parse_side(j.at("functional_side").get<std::string>())};
      }
      s.vehicle_ids = j.at("vehicle_ids").get<std::vector<int>>();
      s.scripted_ids = j.at("scripted_ids").get<std::vector<int>>();
      for (const auto& [key, segs] : j.at("maneuvers").items()) {
        const int id = std::stoi(key);
        auto& list = s.maneuvers[id];
        for (const auto& seg : segs) {
          list.push_back({id, parse_maneuver(seg.at("maneuver").get<std::string>()),
                          seg.at("start_frame").get<int>(), seg.at("end_frame").get<int>()});
        }
      }
      for (const auto& [key, n] : j.at("lane_changes").items()) {
        s.lane_changes[std::stoi(key)] = n.get<int>();
      }
      gt.scenarios.push_back(std::move(s));
    }
  } catch (const json::exception& e) {
    throw SchemaError(fmt::format("ground truth: {}", e.what()));
  }
  return gt;
}

void write_synth(const std::filesystem::path& dir, const SynthRecording& rec) {
  write_recording(dir, rec.meta, rec.tracks);
  const auto path = recording_file(dir, rec.meta.recording_id, "groundtruth");
  auto json_path = path;
  json_path.replace_extension(".json");
  write_atomically(json_path, rec.truth.to_json());
}

GroundTruth load_ground_truth(const std::filesystem::path& dir, int recording_id) {
  auto path = recording_file(dir, recording_id, "groundtruth");
  path.replace_extension(".json");
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError(fmt::format("cannot open {}", path.string()));
  std::stringstream ss;
  ss << f.rdbuf();
  return GroundTruth::from_json(ss.str());
}

std::vector<ScriptSpec> tiered_corpus(std::uint64_t seed, int n_per_tier) {
  if (n_per_tier < 1) throw ArgumentError("tiered_corpus: n_per_tier must be at least 1");
  SynthRng rng(seed);
  std::vector<ScriptSpec> out;
  for (const auto& tier : kTiers) {
    for (int i = 0; i < n_per_tier; ++i) {
      ScriptSpec s;
      s.kind = kChallengerTemplates[static_cast<std::size_t>(i) % kChallengerTemplates.size()];
      s.side = rng.uniform(0.0, 1.0) < 0.5 ? Side::left : Side::right;
      s.severity = rng.uniform(tier.lo, tier.hi);
      s.seed = rng.next();
      s.lane_count = 3;
      out.push_back(s);
    }
  }
  return out;
}

std::vector<ScriptSpec> oracle_corpus(std::uint64_t seed, int n) {
  if (n < 0) throw ArgumentError("oracle_corpus: negative size");
  SynthRng rng(seed);
  std::vector<ScriptSpec> out;
  for (int i = 0; i < n; ++i) {
    ScriptSpec s;
    s.kind = static_cast<Template>(i % kTemplateCount);
    s.side = rng.uniform(0.0, 1.0) < 0.5 ? Side::left : Side::right;
    s.severity = rng.uniform(0.0, 1.0);
    s.seed = rng.next();
    s.lane_count = (i / 20) % 5 == 4 ? 2 : 3;
    out.push_back(s);
  }
  return out;
}

std::vector<SynthRecording> generate_corpus(std::span<const ScriptSpec> specs, int per_recording,
                                            int first_recording_id) {
  if (per_recording < 1) throw ArgumentError("generate_corpus: per_recording must be positive");
  std::vector<SynthRecording> out;
  std::size_t i = 0;
  int id = first_recording_id;
  while (i < specs.size()) {
    // Recordings break where the count is reached or lane_count changes.
    std::size_t j = i + 1;
    while (j < specs.size() && j - i < static_cast<std::size_t>(per_recording) &&
           specs[j].lane_count == specs[i].lane_count) {
      ++j;
    }
    out.push_back(generate_recording(specs.subspan(i, j - i), id++));
    i = j;
  }
  return out;
}

std::string synth_manifest() {
  json m;
  m["manifest_version"] = kManifestVersion;
  m["rng"] = "mt19937_64 seeded per spec; uniform(a,b) = a + (b-a) * ((r >> 11) * 2^-53)";
  m["frame_dt_s"] = kDt;
  m["lane_width_m"] = kLaneWidth;
  m["maneuver_start_s"] = kManeuverStart;
  m["lane_change_duration_s"] = kLaneChangeTime;
  m["slot_gap_frames"] = kSlotGapFrames;
  m["ego_speed_mps"] = {24.0, 32.0};
  m["car_length_m"] = {4.3, 4.8};
  m["car_width_m"] = {1.85, 2.0};
  m["truck_length_m"] = {12.0, 16.0};
  json tiers = json::array();
  for (const auto& t : kTiers) tiers.push_back({t.lo, t.hi});
  m["severity_tiers"] = tiers;
  json tmpl = json::object();
  tmpl["platoon"] = {{"time_gap_s", {1.6, 1.0}}};
  tmpl["braking-lead"] = {{"decel_mps2", {3.0, 7.0}},
                          {"speed_drop_mps", {6.0, 14.0}},
                          {"final_time_gap_s", {0.8, 0.4}},
                          {"initial_time_gap_s", 1.3}};
  tmpl["cut-in"] = {{"ahead", {{"slower_by_mps", {1.5, 5.0}}, {"end_gap_m", {12.0, 5.0}}}},
                    {"alongside", {{"faster_by_mps", {5.0, 3.5}}, {"offset_m", {-1.0, 1.0}}}},
                    {"behind", {{"faster_by_mps", {7.0, 9.0}}, {"offset_m", {-6.5, -7.0}}}}};
  tmpl["cut-out"] = {{"time_gap_s", 1.2}, {"decel_mps2", {3.5, 5.0}}, {"decel_delay_s", 0.5}};
  tmpl["alongside-drift"] = {{"lateral_speed_mps", {0.9, 1.2}}, {"end_lateral_gap_m", {0.12, 0.05}}};
  tmpl["rear-approach"] = {{"faster_by_mps", {4.0, 9.0}}, {"end_gap_m", {8.0, 3.0}},
                           {"min_start_gap_m", 46.0}};
  tmpl["ego-lane-change"] = {
      {"ahead", {{"slower_by_mps", {2.0, 5.0}}, {"end_gap_m", {12.0, 6.0}}}},
      {"behind", {{"faster_by_mps", {5.0, 7.0}}, {"end_gap_m", {10.0, 4.0}}, {"brake_delay_s", 2.2}}}};
  tmpl["overtake"] = {{"faster_by_mps", {6.0, 9.0}}};
  tmpl["background"] = {{"count", "round(3 * severity)"}, {"offsets_m", {10.0, -26.0, 50.0}}};
  m["templates"] = tmpl;
  return m.dump(2) + "\n";
}

}  // namespace scenkit
