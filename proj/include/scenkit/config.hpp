#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <string>

namespace scenkit {

struct RoiParams {
  double time_gap_s = 1.8;      // safety distance expressed as a time gap
  double min_extent_m = 10.0;   // longitudinal floor so standing traffic has neighbours
  double time_gap_cap_s = 100.0;
  double standstill_speed = 0.1;  // below this the time gap is capped
};

struct ManeuverParams {
  double closing_speed = 1.0;     // approaching
  double opening_speed = 1.0;     // falling behind
  double lead_brake_accel = -2.0;  // lead braking
  double parallel_speed = 2.0;    // parallel driving |dv|
  double lateral_speed = 0.1;     // lane-change window extent
  double min_segment_s = 0.5;
};

struct ChallengerParams {
  double horizon_s = 4.0;
  double step_s = 0.2;
  double sub_safety_gap_s = 0.9;
  double accel_decay_s = 2.0;
  double lateral_decay_s = 1.0;
};

struct FunctionalParams {
  double window_s = 2.0;  // half-width around the challenger onset
};

struct ComplexityParams {
  std::array<double, 13> weights{0.01, 0.087, 0.087, 0.1,   0.087, 0.077, 0.087,
                                 0.087, 0.087, 0.087, 0.1, 0.02,  0.084};
  double max_members = 11.0;
  double speed_ref = 50.0;
  double accel_ref = 4.0;
  double speed_std_ref = 10.0;
  double dependency_gap_s = 1.8;
  double dependency_ref = 11.0;
  double predictability_ref_m = 2.0;
  double predictability_lag_s = 1.0;
  double gap_ref_s = 1.8;
  double freedom_gap_s = 1.8;
  int occlusion_rays = 360;
  double tp_actions_ref = 10.0;
  double brake_onset_accel = -2.0;
  double ttb_decel = 8.0;
  double ttb_ref_s = 4.0;
  double ego_actions_ref = 5.0;
};

struct CriticalityParams {
  double ttc_cap_s = 10.0;
  double critical_ttc_s = 1.5;
};

struct ControllerConfig {
  double set_speed = 0.0;  // m/s; <= 0 holds the recorded speed at the start frame
  double acc_time_gap = 1.8;
  double aeb_ttc_trigger = 1.5;
  double max_accel = 2.0;
  double comfort_decel = -3.0;
  double max_decel = -8.0;
  double lane_change_gap = 1.8;
  double lane_change_duration = 4.0;
  double lane_change_speed_margin = 2.0;
  double speed_gain = 0.5;
  double gap_gain = 0.2;
  double relative_speed_gain = 0.6;
  double standstill_gap = 2.0;
  double lane_keep_gain = 1.0;

  /// Throws ConfigError unless max_decel < comfort_decel < 0 < max_accel.
  void validate() const;
};

struct SimParams {
  double min_length_s = 1.0;
};

struct PipelineConfig {
  RoiParams roi;
  ManeuverParams maneuver;
  ChallengerParams challenger;
  FunctionalParams functional;
  ComplexityParams complexity;
  CriticalityParams criticality;
  ControllerConfig controller;
  SimParams sim;

  /// Validates cross-field invariants (weights, controller ordering).
  void validate() const;
};

/// Flat `key = value` text with `[section]` headers and `#` comments.
using IniSections = std::map<std::string, std::map<std::string, std::string>>;
IniSections parse_ini(const std::string& text);

/// Applies every key of `sections` on top of `base`. Unknown keys are errors.
PipelineConfig apply_ini(PipelineConfig base, const IniSections& sections);
PipelineConfig load_config(const std::filesystem::path& path);
/// Config text with every tunable constant and its current value.
std::string dump_config(const PipelineConfig& cfg);
/// Reads a weights file: 13 numbers separated by commas, whitespace or newlines.
std::array<double, 13> load_weights_file(const std::filesystem::path& path);

}  // namespace scenkit
