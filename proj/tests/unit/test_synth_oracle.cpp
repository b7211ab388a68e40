#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "scenkit/complexity_engine.hpp"
#include "scenkit/error.hpp"
#include "scenkit/scenario_extractor.hpp"
#include "scenkit/synth_oracle.hpp"
#include "test_util.hpp"

using namespace scenkit;
namespace fs = std::filesystem;
using scenkit::testing::temp_dir;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

ScriptSpec spec_of(Template kind, double severity, std::uint64_t seed, Side side = Side::left) {
  ScriptSpec s;
  s.kind = kind;
  s.severity = severity;
  s.seed = seed;
  s.side = side;
  return s;
}

}  // namespace

TEST(GenerateRecording, CutInHasTheMergerAsChallenger) {
  const auto rec = generate_recording(std::vector{spec_of(Template::cut_in, 0.8, 7)}, 1);
  ASSERT_EQ(rec.truth.scenarios.size(), 1u);
  const auto& gt = rec.truth.scenarios[0];
  ASSERT_TRUE(gt.challenger_id.has_value());
  EXPECT_EQ(gt.lane_changes.at(*gt.challenger_id), 1);
  EXPECT_EQ(gt.lane_changes.at(gt.ego_id), 0);
  ASSERT_TRUE(gt.functional.has_value());
  EXPECT_EQ(gt.functional->side, Side::left);
  EXPECT_EQ(rec.meta.num_vehicles, static_cast<int>(rec.tracks.size()));
}

TEST(GenerateRecording, FreeDrivingIsASingleVehicle) {
  const auto rec = generate_recording(std::vector{spec_of(Template::free_driving, 0.5, 3)}, 1);
  EXPECT_EQ(rec.tracks.size(), 1u);
  EXPECT_FALSE(rec.truth.scenarios[0].challenger_id.has_value());
  EXPECT_FALSE(has_challenger(Template::free_driving));
  EXPECT_FALSE(has_challenger(Template::platoon));
  EXPECT_TRUE(has_challenger(Template::cut_in));
}

TEST(GenerateRecording, SameSpecsGiveByteIdenticalFiles) {
  const auto specs = oracle_corpus(77, 12);
  const auto a = temp_dir("synth_a");
  const auto b = temp_dir("synth_b");
  write_synth(a, generate_recording(specs, 2));
  write_synth(b, generate_recording(specs, 2));
  for (const char* name : {"02_tracks.csv", "02_tracksMeta.csv", "02_recordingMeta.csv",
                           "02_groundtruth.json"}) {
    ASSERT_TRUE(fs::exists(a / name)) << name;
    EXPECT_EQ(slurp(a / name), slurp(b / name)) << name;
  }
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(GenerateRecording, SpecErrors) {
  EXPECT_THROW(generate_recording(std::vector<ScriptSpec>{}, 1), SpecError);
  auto s = spec_of(Template::cut_in, 0.5, 1);
  s.lane_count = 1;
  EXPECT_THROW(generate_recording(std::vector{s}, 1), SpecError);
  s = spec_of(Template::cut_in, 1.5, 1);
  EXPECT_THROW(generate_recording(std::vector{s}, 1), SpecError);
  s = spec_of(Template::overtake, 0.5, 1, Side::none);
  EXPECT_THROW(generate_recording(std::vector{s}, 1), SpecError);
  auto two = std::vector{spec_of(Template::platoon, 0.5, 1), spec_of(Template::platoon, 0.5, 2)};
  two[1].lane_count = 2;
  EXPECT_THROW(generate_recording(two, 1), SpecError);
  EXPECT_THROW(parse_template("u-turn"), SpecError);
  s = spec_of(Template::free_driving, 0.5, 1);
  s.lane_count = 1;
  EXPECT_NO_THROW(generate_recording(std::vector{s}, 1));
}

TEST(Templates, LabelsRoundTrip) {
  for (int i = 0; i < kTemplateCount; ++i) {
    const auto t = static_cast<Template>(i);
    EXPECT_EQ(parse_template(to_string(t)), t);
  }
}

TEST(SynthRng, DocumentedUniformMapping) {
  SynthRng a(123);
  std::mt19937_64 raw(123);
  for (int i = 0; i < 100; ++i) {
    const double expected = 2.0 + 3.0 * (static_cast<double>(raw() >> 11) * 0x1.0p-53);
    EXPECT_DOUBLE_EQ(a.uniform(2.0, 5.0), expected);
  }
}

TEST(TieredCorpus, CountsAndDeterminism) {
  EXPECT_EQ(tiered_corpus(42, 1).size(), 3u);
  const auto a = tiered_corpus(42, 50);
  const auto b = tiered_corpus(42, 50);
  ASSERT_EQ(a.size(), 150u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].seed, b[i].seed);
    EXPECT_EQ(a[i].severity, b[i].severity);
    EXPECT_EQ(a[i].kind, b[i].kind);
    EXPECT_TRUE(has_challenger(a[i].kind));
  }
  for (int tier = 0; tier < 2; ++tier) {
    for (int i = 0; i < 50; ++i) {
      EXPECT_LT(a[static_cast<std::size_t>(tier * 50 + i)].severity,
                a[static_cast<std::size_t>((tier + 1) * 50 + i)].severity);
    }
  }
  EXPECT_THROW(tiered_corpus(42, 0), ArgumentError);
}

TEST(TieredCorpus, TierMeanComplexityStrictlyIncreases) {
  const auto specs = tiered_corpus(42, 50);
  std::array<double, 3> sum{};
  std::array<int, 3> n{};
  for (const auto& sr : generate_corpus(specs)) {
    const Recording rec = sr.recording();
    for (const auto& gt : sr.truth.scenarios) {
      const Scenario s = build_scenario(rec, rec.track(gt.ego_id));
      // Every spec has three lanes, so recordings hold 20 consecutive specs.
      const std::size_t global =
          static_cast<std::size_t>(sr.meta.recording_id - 1) * 20 + gt.spec_index;
      ASSERT_EQ(specs[global].seed, gt.spec.seed);
      sum[global / 50] += scenario_complexity(s, default_weights()).value;
      ++n[global / 50];
    }
  }
  ASSERT_EQ(n, (std::array<int, 3>{50, 50, 50}));
  const double low = sum[0] / 50, mid = sum[1] / 50, high = sum[2] / 50;
  EXPECT_LT(low, mid);
  EXPECT_LT(mid, high);
}

TEST(GenerateRecordingProperty, KinematicsAreConsistent) {
  for (const auto& sr : generate_corpus(oracle_corpus(6, 45))) {
    for (const auto& t : sr.tracks) {
      for (std::size_t k = 1; k < t.points.size(); ++k) {
        const auto& p = t.points[k - 1];
        const auto& q = t.points[k];
        ASSERT_EQ(q.frame, p.frame + 1);
        EXPECT_NEAR(q.x - p.x, 0.5 * (p.vx + q.vx) * kHighdFrameDt, 1e-6);
        EXPECT_NEAR(q.y - p.y, 0.5 * (p.vy + q.vy) * kHighdFrameDt, 1e-6);
        EXPECT_GE(q.vx, 0.0);
      }
    }
    EXPECT_TRUE(validate_recording(sr.meta, sr.tracks).ok());
  }
}

TEST(GroundTruth, JsonRoundTrip) {
  const auto sr = generate_recording(oracle_corpus(8, 18), 5);
  const GroundTruth back = GroundTruth::from_json(sr.truth.to_json());
  EXPECT_EQ(back.to_json(), sr.truth.to_json());
  ASSERT_EQ(back.scenarios.size(), sr.truth.scenarios.size());
  for (std::size_t i = 0; i < back.scenarios.size(); ++i) {
    EXPECT_EQ(back.scenarios[i].ego_id, sr.truth.scenarios[i].ego_id);
    EXPECT_EQ(back.scenarios[i].challenger_id, sr.truth.scenarios[i].challenger_id);
    EXPECT_EQ(back.scenarios[i].functional, sr.truth.scenarios[i].functional);
  }
  EXPECT_THROW(GroundTruth::from_json("{\"recording_id\": 1}"), SchemaError);
}

TEST(GroundTruth, LoadFromDisk) {
  const auto dir = temp_dir("synth_gt");
  const auto sr = generate_recording(oracle_corpus(9, 9), 3);
  write_synth(dir, sr);
  EXPECT_EQ(load_ground_truth(dir, 3).to_json(), sr.truth.to_json());
  EXPECT_THROW(load_ground_truth(dir, 4), IoError);
  fs::remove_all(dir);
}

TEST(SynthManifest, MatchesTheCheckedInFile) {
  const fs::path file = fs::path(SCENKIT_SOURCE_DIR) / "config" / "synth_manifest.json";
  ASSERT_TRUE(fs::exists(file));
  EXPECT_EQ(synth_manifest(), slurp(file));
}

TEST(GenerateCorpus, SplitsOnCountAndLaneCount) {
  const auto specs = oracle_corpus(1, 100);
  const auto recs = generate_corpus(specs, 20);
  std::size_t total = 0;
  int prev = 0;
  for (const auto& r : recs) {
    EXPECT_LE(r.truth.scenarios.size(), 20u);
    EXPECT_GT(r.meta.recording_id, prev);
    prev = r.meta.recording_id;
    total += r.truth.scenarios.size();
  }
  EXPECT_EQ(total, 100u);
}
