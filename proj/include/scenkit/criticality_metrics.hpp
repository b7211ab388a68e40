#pragma once

#include <span>
#include <vector>

#include "scenkit/config.hpp"
#include "scenkit/core_model.hpp"

namespace scenkit {

struct TtcSeries {
  std::vector<double> values;  // per frame, capped
  double min_ttc = 10.0;
};

/// Bumper gap over closing speed, capped; 0 when the footprints touch.
/// Throws ArgumentError when `front` is not ahead of `rear`.
double ttc(const VehicleState& rear, const VehicleState& front, double cap_s = 10.0);

/// Minimum of a TTC series, or the cap when empty.
double min_ttc(std::span<const double> series, double cap_s = 10.0);
TtcSeries make_ttc_series(std::vector<double> values, double cap_s = 10.0);

/// Strictly below the critical value. Throws ArgumentError for negative input.
bool is_critical(double min_ttc_s, double critical_s = 1.5);

}  // namespace scenkit
