#include "scenkit/functional_classifier.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "scenkit/error.hpp"
#include "scenkit/maneuver_classifier.hpp"

namespace scenkit {
namespace {

constexpr std::array<std::string_view, kFunctionalCount> kNames = {
    "I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX"};

struct Window {
  int first;
  int last;
  bool contains(int f) const { return f >= first && f <= last; }
};

// Lane changes with their crossing inside the window, nearest to the onset first.
std::vector<LaneChange> changes_in(const Track& track, const Road& road, const Window& w,
                                   int onset, const ManeuverParams& mp) {
  std::vector<LaneChange> out;
  for (const auto& lc : detect_lane_changes(track, road, mp)) {
    if (w.contains(lc.crossing_frame)) out.push_back(lc);
  }
  std::stable_sort(out.begin(), out.end(), [onset](const auto& a, const auto& b) {
    return std::abs(a.crossing_frame - onset) < std::abs(b.crossing_frame - onset);
  });
  return out;
}

Side side_of(int rel) { return rel > 0 ? Side::left : Side::right; }

}  // namespace

std::string_view to_string(FunctionalScenario f) { return kNames[static_cast<std::size_t>(f)]; }

FunctionalScenario parse_functional(std::string_view label) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == label) return static_cast<FunctionalScenario>(i);
  }
  throw SchemaError(fmt::format("unknown functional scenario '{}'", label));
}

FunctionalClass classify_scenario(const Scenario& scenario, const ChallengerEvent& challenger,
                                  const FunctionalParams& fp, const ManeuverParams& mp) {
  if (!scenario.participant_ids.contains(challenger.tp_id)) {
    throw ClassificationError(
        fmt::format("challenger {} is not a participant of ego {}", challenger.tp_id,
                    scenario.ego_id));
  }
  const Track& tp = scenario.participant(challenger.tp_id);
  const Track& ego = scenario.ego;
  const TrackPoint* tp_on = tp.at(challenger.onset_frame);
  const TrackPoint* ego_on = ego.at(challenger.onset_frame);
  if (tp_on == nullptr || ego_on == nullptr) {
    throw ClassificationError(fmt::format("challenger {} is absent at onset frame {}",
                                          challenger.tp_id, challenger.onset_frame));
  }

  const int half = static_cast<int>(std::lround(fp.window_s / scenario.dt));
  Window w{std::max({challenger.onset_frame - half, scenario.first_frame(), tp.initial_frame()}),
           std::min({challenger.onset_frame + half, scenario.last_frame(), tp.final_frame()})};
  const Road& road = scenario.road;

  // Challenger lane change into or out of the ego lane.
  for (const auto& lc : changes_in(tp, road, w, challenger.onset_frame, mp)) {
    const TrackPoint* ep = ego.at(lc.crossing_frame);
    if (ep == nullptr) continue;
    const auto from = lane_offset(road, ep->lane_id, lc.from_lane);
    const auto to = lane_offset(road, ep->lane_id, lc.to_lane);
    if (!from || !to) continue;
    if (*to == 0 && std::abs(*from) == 1) {
      const int f = std::clamp(lc.start_frame, std::max(tp.initial_frame(), ego.initial_frame()),
                               lc.crossing_frame);
      const VehicleState e = make_state(ego, *ego.at(f));
      const VehicleState c = make_state(tp, *tp.at(f));
      FunctionalScenario cls = FunctionalScenario::III;
      if (c.rear() > e.front()) {
        cls = FunctionalScenario::II;
      } else if (c.front() < e.rear()) {
        cls = FunctionalScenario::IV;
      }
      return {cls, side_of(*from)};
    }
    if (*from == 0 && std::abs(*to) == 1) return {FunctionalScenario::V, side_of(*to)};
  }

  // Ego lane change into the challenger's lane.
  for (const auto& lc : changes_in(ego, road, w, challenger.onset_frame, mp)) {
    const TrackPoint* cp = tp.at(lc.crossing_frame);
    if (cp == nullptr || cp->lane_id != lc.to_lane) continue;
    const TrackPoint* ep = ego.at(lc.crossing_frame);
    const FunctionalScenario cls =
        cp->x > ep->x ? FunctionalScenario::VIII : FunctionalScenario::IX;
    return {cls, lc.direction};
  }

  const int rel = lane_offset(road, ego_on->lane_id, tp_on->lane_id).value_or(0);
  if (rel == 0) {
    return {tp_on->x > ego_on->x ? FunctionalScenario::I : FunctionalScenario::VII, Side::none};
  }
  return {FunctionalScenario::VI, side_of(rel)};
}

ClassHistogram class_histogram(std::span<const FunctionalClass> classes) {
  ClassHistogram h{};
  for (const auto& c : classes) ++h[static_cast<std::size_t>(c.scenario)];
  return h;
}

}  // namespace scenkit
