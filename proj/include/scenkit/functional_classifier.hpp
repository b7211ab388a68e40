#pragma once

#include <array>
#include <span>
#include <string_view>

#include "scenkit/challenger_detector.hpp"
#include "scenkit/config.hpp"
#include "scenkit/core_model.hpp"

namespace scenkit {

/// Nine highway functional scenarios, keyed on the challenger's start/end zone
/// relative to the ego and on who changes lane.
enum class FunctionalScenario { I, II, III, IV, V, VI, VII, VIII, IX };
inline constexpr int kFunctionalCount = 9;

std::string_view to_string(FunctionalScenario f);
FunctionalScenario parse_functional(std::string_view label);

struct FunctionalClass {
  FunctionalScenario scenario = FunctionalScenario::I;
  Side side = Side::none;

  bool operator==(const FunctionalClass&) const = default;
};

/// Throws ClassificationError when the challenger is absent at the onset.
FunctionalClass classify_scenario(const Scenario& scenario, const ChallengerEvent& challenger,
                                  const FunctionalParams& fp = {}, const ManeuverParams& mp = {});

using ClassHistogram = std::array<int, kFunctionalCount>;
ClassHistogram class_histogram(std::span<const FunctionalClass> classes);

}  // namespace scenkit
