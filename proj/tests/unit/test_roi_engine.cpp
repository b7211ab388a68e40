#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "scenkit/error.hpp"
#include "scenkit/roi_engine.hpp"
#include "test_util.hpp"

using namespace scenkit;
using scenkit::testing::state_at;
using scenkit::testing::three_lane_road;

namespace {

struct RandomScene {
  VehicleState ego;
  std::vector<VehicleState> others;
};

RandomScene random_scene(std::mt19937_64& rng, const Road& road) {
  std::uniform_int_distribution<int> lane(0, road.lane_count() - 1);
  std::uniform_int_distribution<int> count(0, 14);
  std::uniform_real_distribution<double> dx(-80.0, 80.0), v(0.0, 40.0), lat(-1.0, 1.0);
  std::bernoulli_distribution truck(0.2);
  RandomScene s;
  s.ego = state_at(road, 1, lane(rng), 0.0, v(rng));
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    const bool t = truck(rng);
    VehicleState o = state_at(road, i + 2, lane(rng), dx(rng), v(rng), t ? 14.0 : 4.5,
                              t ? 2.5 : 1.9, t ? VehicleClass::truck : VehicleClass::car);
    o.point.y += lat(rng);
    s.others.push_back(o);
  }
  return s;
}

VehicleState mirror_state(VehicleState v) {
  v.point.y = -v.point.y;
  v.point.vy = -v.point.vy;
  v.point.ay = -v.point.ay;
  return v;
}

// Independent reading of the membership rule: lane adjacency plus the
// asymmetric longitudinal window, before slot capacity is applied.
bool in_window(const VehicleState& ego, const VehicleState& o, const Road& road) {
  const auto rel = lane_offset(road, ego.point.lane_id, o.point.lane_id);
  if (!rel || std::abs(*rel) > 1) return false;
  const double dx = o.point.x - ego.point.x;
  const double front = std::max(1.8 * ego.point.vx, 10.0);
  const double rear = std::max(1.8 * o.point.vx, 10.0);
  return dx <= front && dx >= -rear;
}

}  // namespace

TEST(SafetyDistance, Examples) {
  EXPECT_DOUBLE_EQ(safety_distance(30.0), 54.0);
  EXPECT_DOUBLE_EQ(safety_distance(0.0), 0.0);
  EXPECT_DOUBLE_EQ(safety_distance(25.0), 45.0);
  EXPECT_THROW(safety_distance(-1.0), ArgumentError);
}

TEST(TimeGap, Examples) {
  const Road road = three_lane_road();
  // 36 m bumper gap at 20 m/s.
  const auto rear = state_at(road, 1, 1, 0.0, 20.0);
  const auto front = state_at(road, 2, 1, 36.0 + 4.5, 15.0);
  EXPECT_NEAR(time_gap(rear, front), 1.8, 1e-12);
  const auto standing = state_at(road, 1, 1, 0.0, 0.0);
  EXPECT_DOUBLE_EQ(time_gap(standing, front), 100.0);
  const auto fast = state_at(road, 1, 1, 0.0, 30.0);
  const auto near = state_at(road, 2, 1, 15.0 + 4.5, 30.0);
  EXPECT_NEAR(time_gap(fast, near), 0.5, 1e-12);
  EXPECT_THROW(time_gap(front, rear), ArgumentError);
}

TEST(AssignRoi, SingleLeadDeadAhead) {
  const Road road = three_lane_road();
  const auto ego = state_at(road, 1, 1, 0.0, 20.0);
  const std::vector<VehicleState> others{state_at(road, 2, 1, 30.0, 20.0)};
  const auto m = assign_roi(ego, others, road);
  EXPECT_DOUBLE_EQ(m.d_safety_front, 36.0);
  ASSERT_EQ(m.members.size(), 1u);
  EXPECT_EQ(m.members.at(2), RoiSlot::ego_preceding);
}

TEST(AssignRoi, TwoLanesAwayIsNotAMember) {
  const Road road = three_lane_road();
  const auto ego = state_at(road, 1, 0, 0.0, 20.0);
  const std::vector<VehicleState> others{state_at(road, 2, 2, 5.0, 20.0)};
  EXPECT_TRUE(assign_roi(ego, others, road).members.empty());
}

TEST(AssignRoi, SlotsOfAFullNeighbourhood) {
  const Road road = three_lane_road();
  const auto ego = state_at(road, 1, 1, 0.0, 30.0);
  std::vector<VehicleState> others;
  int id = 2;
  for (int lane = 0; lane < 3; ++lane) {
    others.push_back(state_at(road, id++, lane, 20.0, 30.0));
    others.push_back(state_at(road, id++, lane, 40.0, 30.0));
    others.push_back(state_at(road, id++, lane, -20.0, 30.0));
    if (lane != 1) others.push_back(state_at(road, id++, lane, 1.0, 30.0));
  }
  const auto m = assign_roi(ego, others, road);
  EXPECT_EQ(m.members.size(), 11u);
  std::set<RoiSlot> used;
  for (const auto& [vid, slot] : m.members) used.insert(slot);
  EXPECT_EQ(used.size(), 11u);
  EXPECT_EQ(m.occupant(RoiSlot::left_alongside), 12);
  EXPECT_EQ(m.occupant(RoiSlot::right_second_preceding), 3);
  EXPECT_EQ(m.occupant(RoiSlot::ego_following), 8);
}

TEST(AssignRoi, DistanceTiesBreakOnSmallerId) {
  const Road road = three_lane_road();
  const auto ego = state_at(road, 1, 1, 0.0, 30.0);
  const std::vector<VehicleState> others{state_at(road, 9, 1, 20.0, 30.0),
                                         state_at(road, 4, 1, 20.0, 30.0)};
  const auto m = assign_roi(ego, others, road);
  EXPECT_EQ(m.occupant(RoiSlot::ego_preceding), 4);
  EXPECT_EQ(m.occupant(RoiSlot::ego_second_preceding), 9);
}

TEST(AssignRoi, RearExtentUsesTheFollowerSpeed) {
  const Road road = three_lane_road();
  const auto ego = state_at(road, 1, 1, 0.0, 10.0);
  const std::vector<VehicleState> fast{state_at(road, 2, 1, -50.0, 30.0)};
  const std::vector<VehicleState> slow{state_at(road, 2, 1, -50.0, 10.0)};
  EXPECT_EQ(assign_roi(ego, fast, road).occupant(RoiSlot::ego_following), 2);
  EXPECT_TRUE(assign_roi(ego, slow, road).members.empty());
}

TEST(AssignRoi, StandingTrafficKeepsMinimumExtent) {
  const Road road = three_lane_road();
  const auto ego = state_at(road, 1, 1, 0.0, 0.0);
  const std::vector<VehicleState> others{state_at(road, 2, 1, 9.0, 0.0),
                                         state_at(road, 3, 1, -9.0, 0.0)};
  EXPECT_EQ(assign_roi(ego, others, road).members.size(), 2u);
}

TEST(AssignRoiProperty, MirrorSwapsSides) {
  const Road road = three_lane_road();
  const Road mroad = road.mirrored();
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    const RandomScene s = random_scene(rng, road);
    std::vector<VehicleState> mothers;
    for (const auto& o : s.others) mothers.push_back(mirror_state(o));
    const auto a = assign_roi(s.ego, s.others, road);
    const auto b = assign_roi(mirror_state(s.ego), mothers, mroad);
    ASSERT_EQ(a.members.size(), b.members.size());
    for (const auto& [id, slot] : a.members) {
      ASSERT_TRUE(b.members.contains(id));
      EXPECT_EQ(b.members.at(id), mirror(slot));
    }
  }
}

TEST(AssignRoiProperty, MembersLieInsideTheWindowAndSlotsAreInjective) {
  const Road road = three_lane_road();
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 2000; ++trial) {
    const RandomScene s = random_scene(rng, road);
    const auto m = assign_roi(s.ego, s.others, road);
    std::set<RoiSlot> used;
    for (const auto& [id, slot] : m.members) {
      EXPECT_TRUE(used.insert(slot).second);
      const auto& o = *std::find_if(s.others.begin(), s.others.end(),
                                    [id = id](const auto& v) { return v.id == id; });
      EXPECT_TRUE(in_window(s.ego, o, road));
    }
    // Every lane with a candidate in the window has at least one member there.
    for (const auto& o : s.others) {
      if (!in_window(s.ego, o, road)) continue;
      const int rel = *lane_offset(road, s.ego.point.lane_id, o.point.lane_id);
      bool lane_used = false;
      for (const auto& [id, slot] : m.members) {
        const auto& v = *std::find_if(s.others.begin(), s.others.end(),
                                      [id = id](const auto& x) { return x.id == id; });
        lane_used |= *lane_offset(road, s.ego.point.lane_id, v.point.lane_id) == rel;
      }
      EXPECT_TRUE(lane_used);
    }
  }
}

TEST(AssignRoiProperty, FasterEgoNeverDropsAnAheadMember) {
  const Road road = three_lane_road();
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 1000; ++trial) {
    RandomScene s = random_scene(rng, road);
    const auto before = assign_roi(s.ego, s.others, road);
    s.ego.point.vx += 5.0;
    const auto after = assign_roi(s.ego, s.others, road);
    for (const auto& [id, slot] : before.members) {
      const auto& o = *std::find_if(s.others.begin(), s.others.end(),
                                    [id = id](const auto& v) { return v.id == id; });
      if (o.point.x > s.ego.point.x) EXPECT_TRUE(after.members.contains(id));
    }
  }
}

TEST(RoiMembership, AbsentEgoIsALookupError) {
  auto meta = scenkit::testing::three_lane_meta();
  const Road road = meta.road(Carriageway::lower);
  std::vector<Track> tracks{scenkit::testing::straight_track(road, {.id = 1, .frames = 10})};
  const Recording rec = make_recording(meta, tracks);
  EXPECT_NO_THROW(roi_membership(rec, 1, 5));
  EXPECT_THROW(roi_membership(rec, 1, 50), LookupError);
}
