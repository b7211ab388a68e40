#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "scenkit/cli_report.hpp"
#include "scenkit/config.hpp"
#include "scenkit/error.hpp"
#include "test_util.hpp"

using namespace scenkit;
using scenkit::testing::temp_dir;

namespace {

void spit(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::trunc);
  f << text;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

TEST(Config, CheckedInDefaultsMatchBuiltIns) {
  const fs::path file = fs::path(SCENKIT_SOURCE_DIR) / "config" / "default.ini";
  ASSERT_TRUE(fs::exists(file));
  EXPECT_EQ(slurp(file), dump_config(PipelineConfig{}));
  const PipelineConfig loaded = load_config(file);
  EXPECT_EQ(dump_config(loaded), dump_config(PipelineConfig{}));
}

TEST(Config, DumpParsesBackToTheSameValues) {
  PipelineConfig c;
  c.roi.time_gap_s = 2.25;
  c.controller.set_speed = 33.5;
  c.complexity.occlusion_rays = 720;
  const PipelineConfig back = apply_ini(PipelineConfig{}, parse_ini(dump_config(c)));
  EXPECT_EQ(back.roi.time_gap_s, 2.25);
  EXPECT_EQ(back.controller.set_speed, 33.5);
  EXPECT_EQ(back.complexity.occlusion_rays, 720);
}

TEST(Config, OverridesAndErrors) {
  const auto cfg = apply_ini(PipelineConfig{}, parse_ini("# tweak\n[roi]\ntime_gap_s = 2.0\n"));
  EXPECT_DOUBLE_EQ(cfg.roi.time_gap_s, 2.0);
  EXPECT_DOUBLE_EQ(cfg.roi.min_extent_m, 10.0);
  EXPECT_THROW(apply_ini(PipelineConfig{}, parse_ini("[roi]\nbogus = 1\n")), ConfigError);
  EXPECT_THROW(apply_ini(PipelineConfig{}, parse_ini("[roi]\ntime_gap_s = fast\n")), ConfigError);
  EXPECT_THROW(parse_ini("[roi\n"), ConfigError);
  EXPECT_THROW(apply_ini(PipelineConfig{}, parse_ini("[weights]\nw1 = 0.5\n")), ConfigError);
  EXPECT_THROW(apply_ini(PipelineConfig{}, parse_ini("[controller]\nmax_accel = -1\n")),
               ConfigError);
}

TEST(Config, WeightsFile) {
  const auto dir = temp_dir("config_weights");
  spit(dir / "w.txt", "1, 0 0 0 0 0 0\n0 0 0 0 0 0\n");
  const auto w = load_weights_file(dir / "w.txt");
  EXPECT_DOUBLE_EQ(w[0], 1.0);
  spit(dir / "short.txt", "0.5 0.5\n");
  EXPECT_THROW(load_weights_file(dir / "short.txt"), ConfigError);
  spit(dir / "heavy.txt", "1 1 0 0 0 0 0 0 0 0 0 0 0\n");
  EXPECT_THROW(load_weights_file(dir / "heavy.txt"), ConfigError);
  EXPECT_THROW(load_weights_file(dir / "absent.txt"), IoError);
  fs::remove_all(dir);
}

TEST(Config, FlagBeatsEnvironment) {
  const auto dir = temp_dir("config_env");
  spit(dir / "env.ini", "[roi]\ntime_gap_s = 2.5\n");
  spit(dir / "flag.ini", "[roi]\ntime_gap_s = 3.5\n");
  ::setenv("SCENKIT_CONFIG", (dir / "env.ini").c_str(), 1);
  EXPECT_DOUBLE_EQ(resolve_config(std::nullopt).roi.time_gap_s, 2.5);
  EXPECT_DOUBLE_EQ(resolve_config(dir / "flag.ini").roi.time_gap_s, 3.5);
  ::unsetenv("SCENKIT_CONFIG");
  EXPECT_DOUBLE_EQ(resolve_config(std::nullopt).roi.time_gap_s, 1.8);
  EXPECT_THROW(resolve_config(dir / "missing.ini"), IoError);
  fs::remove_all(dir);
}
