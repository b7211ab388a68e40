#include "scenkit/criticality_metrics.hpp"

#include <algorithm>

#include "scenkit/error.hpp"

namespace scenkit {

double ttc(const VehicleState& rear, const VehicleState& front, double cap_s) {
  if (rear.box().overlaps(front.box())) return 0.0;
  if (!(front.point.x > rear.point.x)) throw ArgumentError("ttc: front vehicle is not ahead");
  const double gap = front.rear() - rear.front();
  if (gap <= 0.0) return 0.0;
  const double closing = rear.point.vx - front.point.vx;
  if (closing <= 0.0) return cap_s;
  return std::min(gap / closing, cap_s);
}

double min_ttc(std::span<const double> series, double cap_s) {
  double m = cap_s;
  for (double v : series) m = std::min(m, v);
  return std::max(m, 0.0);
}

TtcSeries make_ttc_series(std::vector<double> values, double cap_s) {
  TtcSeries s;
  for (double& v : values) v = std::clamp(v, 0.0, cap_s);
  s.min_ttc = min_ttc(values, cap_s);
  s.values = std::move(values);
  return s;
}

bool is_critical(double min_ttc_s, double critical_s) {
  if (min_ttc_s < 0.0) throw ArgumentError("is_critical: negative TTC");
  return min_ttc_s < critical_s;
}

}  // namespace scenkit
