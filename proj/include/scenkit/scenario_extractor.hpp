#pragma once

#include <vector>

#include "scenkit/config.hpp"
#include "scenkit/core_model.hpp"
#include "scenkit/highd_ingest.hpp"

namespace scenkit {

struct ExtractionStats {
  int total_vehicles = 0;
  int scenarios_after_free_driving_filter = 0;
  int scenarios_with_challenger = 0;

  ExtractionStats& operator+=(const ExtractionStats& o) {
    total_vehicles += o.total_vehicles;
    scenarios_after_free_driving_filter += o.scenarios_after_free_driving_filter;
    scenarios_with_challenger += o.scenarios_with_challenger;
    return *this;
  }
};

/// Builds the candidate scenario of one ego over its full presence window.
/// The result may be free driving (no participants).
Scenario build_scenario(const Recording& recording, const Track& ego, const RoiParams& p = {});

/// One scenario per vehicle-as-ego, free-driving scenarios dropped, ordered by
/// ego id. Participants join the ego's cluster on the first frame they enter
/// its ROI and keep their full history inside the window.
std::vector<Scenario> extract_scenarios(const Recording& recording, const RoiParams& p = {},
                                        ExtractionStats* stats = nullptr);

/// Participants plus the ego.
int vehicles_per_scenario(const Scenario& scenario);

}  // namespace scenkit
