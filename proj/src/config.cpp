#include "scenkit/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

#include <fmt/format.h>

#include "scenkit/error.hpp"

namespace scenkit {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& text, const std::string& where) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw ConfigError(fmt::format("{}: '{}' is not a number", where, text));
  }
  return value;
}

struct Field {
  std::string section;
  std::string key;
  double* value = nullptr;
  int* int_value = nullptr;
};

// Single table of every tunable constant; shared by parsing and dumping.
std::vector<Field> fields(PipelineConfig& c) {
  std::vector<Field> f = {
      {"roi", "time_gap_s", &c.roi.time_gap_s},
      {"roi", "min_extent_m", &c.roi.min_extent_m},
      {"roi", "time_gap_cap_s", &c.roi.time_gap_cap_s},
      {"roi", "standstill_speed", &c.roi.standstill_speed},
      {"maneuver", "closing_speed", &c.maneuver.closing_speed},
      {"maneuver", "opening_speed", &c.maneuver.opening_speed},
      {"maneuver", "lead_brake_accel", &c.maneuver.lead_brake_accel},
      {"maneuver", "parallel_speed", &c.maneuver.parallel_speed},
      {"maneuver", "lateral_speed", &c.maneuver.lateral_speed},
      {"maneuver", "min_segment_s", &c.maneuver.min_segment_s},
      {"challenger", "horizon_s", &c.challenger.horizon_s},
      {"challenger", "step_s", &c.challenger.step_s},
      {"challenger", "sub_safety_gap_s", &c.challenger.sub_safety_gap_s},
      {"challenger", "accel_decay_s", &c.challenger.accel_decay_s},
      {"challenger", "lateral_decay_s", &c.challenger.lateral_decay_s},
      {"functional", "window_s", &c.functional.window_s},
      {"complexity", "max_members", &c.complexity.max_members},
      {"complexity", "speed_ref", &c.complexity.speed_ref},
      {"complexity", "accel_ref", &c.complexity.accel_ref},
      {"complexity", "speed_std_ref", &c.complexity.speed_std_ref},
      {"complexity", "dependency_gap_s", &c.complexity.dependency_gap_s},
      {"complexity", "dependency_ref", &c.complexity.dependency_ref},
      {"complexity", "predictability_ref_m", &c.complexity.predictability_ref_m},
      {"complexity", "predictability_lag_s", &c.complexity.predictability_lag_s},
      {"complexity", "gap_ref_s", &c.complexity.gap_ref_s},
      {"complexity", "freedom_gap_s", &c.complexity.freedom_gap_s},
      {"complexity", "occlusion_rays", nullptr, &c.complexity.occlusion_rays},
      {"complexity", "tp_actions_ref", &c.complexity.tp_actions_ref},
      {"complexity", "brake_onset_accel", &c.complexity.brake_onset_accel},
      {"complexity", "ttb_decel", &c.complexity.ttb_decel},
      {"complexity", "ttb_ref_s", &c.complexity.ttb_ref_s},
      {"complexity", "ego_actions_ref", &c.complexity.ego_actions_ref},
      {"criticality", "ttc_cap_s", &c.criticality.ttc_cap_s},
      {"criticality", "critical_ttc_s", &c.criticality.critical_ttc_s},
      {"controller", "set_speed", &c.controller.set_speed},
      {"controller", "acc_time_gap", &c.controller.acc_time_gap},
      {"controller", "aeb_ttc_trigger", &c.controller.aeb_ttc_trigger},
      {"controller", "max_accel", &c.controller.max_accel},
      {"controller", "comfort_decel", &c.controller.comfort_decel},
      {"controller", "max_decel", &c.controller.max_decel},
      {"controller", "lane_change_gap", &c.controller.lane_change_gap},
      {"controller", "lane_change_duration", &c.controller.lane_change_duration},
      {"controller", "lane_change_speed_margin", &c.controller.lane_change_speed_margin},
      {"controller", "speed_gain", &c.controller.speed_gain},
      {"controller", "gap_gain", &c.controller.gap_gain},
      {"controller", "relative_speed_gain", &c.controller.relative_speed_gain},
      {"controller", "standstill_gap", &c.controller.standstill_gap},
      {"controller", "lane_keep_gain", &c.controller.lane_keep_gain},
      {"sim", "min_length_s", &c.sim.min_length_s},
  };
  for (std::size_t i = 0; i < c.complexity.weights.size(); ++i) {
    f.push_back({"weights", fmt::format("w{}", i + 1), &c.complexity.weights[i]});
  }
  return f;
}

void validate_weights(const std::array<double, 13>& w) {
  double sum = 0.0;
  for (double v : w) {
    if (!(v >= 0.0)) throw ConfigError("weights must be non-negative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw ConfigError(fmt::format("weights sum to {:.15g}, expected 1", sum));
  }
}

}  // namespace

void ControllerConfig::validate() const {
  if (!(max_decel < comfort_decel && comfort_decel < 0.0 && 0.0 < max_accel)) {
    throw ConfigError("controller requires max_decel < comfort_decel < 0 < max_accel");
  }
  if (!(lane_change_duration > 0.0)) throw ConfigError("lane_change_duration must be positive");
}

void PipelineConfig::validate() const {
  validate_weights(complexity.weights);
  controller.validate();
  if (!(challenger.step_s > 0.0 && challenger.horizon_s > 0.0)) {
    throw ConfigError("challenger horizon and step must be positive");
  }
  if (complexity.occlusion_rays < 2 || complexity.occlusion_rays % 2 != 0) {
    throw ConfigError("occlusion_rays must be an even number >= 2");
  }
}

IniSections parse_ini(const std::string& text) {
  IniSections out;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find_first_of("#;"); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(fmt::format("line {}: bad section header", lineno));
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(fmt::format("line {}: expected key = value", lineno));
    out[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

PipelineConfig apply_ini(PipelineConfig base, const IniSections& sections) {
  auto table = fields(base);
  for (const auto& [section, entries] : sections) {
    for (const auto& [key, raw] : entries) {
      auto it = std::find_if(table.begin(), table.end(), [&](const Field& f) {
        return f.section == section && f.key == key;
      });
      if (it == table.end()) throw ConfigError(fmt::format("unknown config key [{}] {}", section, key));
      const double v = parse_number(raw, fmt::format("[{}] {}", section, key));
      if (it->int_value != nullptr) {
        *it->int_value = static_cast<int>(std::lround(v));
      } else {
        *it->value = v;
      }
    }
  }
  base.validate();
  return base;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open config file {}", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return apply_ini(PipelineConfig{}, parse_ini(ss.str()));
}

std::string dump_config(const PipelineConfig& cfg) {
  PipelineConfig copy = cfg;
  std::string out;
  std::string section;
  for (const auto& f : fields(copy)) {
    if (f.section != section) {
      if (!section.empty()) out += "\n";
      section = f.section;
      out += fmt::format("[{}]\n", section);
    }
    if (f.int_value != nullptr) {
      out += fmt::format("{} = {}\n", f.key, *f.int_value);
    } else {
      out += fmt::format("{} = {}\n", f.key, *f.value);
    }
  }
  return out;
}

std::array<double, 13> load_weights_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open weights file {}", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  for (char& ch : text) {
    if (ch == ',' || ch == ';') ch = ' ';
  }
  std::istringstream tokens(text);
  std::vector<double> values;
  std::string tok;
  while (tokens >> tok) values.push_back(parse_number(tok, path.string()));
  if (values.size() != 13) {
    throw ConfigError(fmt::format("weights file must contain 13 numbers, found {}", values.size()));
  }
  std::array<double, 13> w{};
  std::copy(values.begin(), values.end(), w.begin());
  validate_weights(w);
  return w;
}

}  // namespace scenkit
