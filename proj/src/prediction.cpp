#include "offload/prediction.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "offload/rng.hpp"

namespace offload {

namespace {

constexpr double kPositionTolerance = 1e-9;

}  // namespace

void ErrorSpec::validate() const {
  if (!(time_error >= 0.0 && time_error < 1.0)) {
    throw std::invalid_argument("time error must be in [0, 1)");
  }
  if (!(throughput_error >= 0.0 && throughput_error < 1.0)) {
    throw std::invalid_argument("throughput error must be in [0, 1)");
  }
}

PredictionProfile build_prediction(const RouteProfile& route, double now,
                                   const ErrorSpec& errors, bool use_local_rate) {
  errors.validate();
  if (now < -kPositionTolerance || now > route.total_time() + kPositionTolerance) {
    throw std::invalid_argument("prediction time outside the route");
  }
  const double te = errors.time_error;
  const double re = errors.throughput_error;

  PredictionProfile p;
  double next_wifi_start = route.total_time();
  bool seen_wifi = false;
  double stretch_time = 0.0;
  double stretch_mbit = 0.0;
  double stretch_min_rate = std::numeric_limits<double>::infinity();
  double first_mobile_after = 0.0;

  for (const auto& s : route.segments()) {
    if (s.end_time() <= now + kPositionTolerance) continue;
    if (s.is_wifi()) {
      if (s.start_time + kPositionTolerance < now) continue;  // already inside it
      if (!seen_wifi) {
        seen_wifi = true;
        next_wifi_start = s.start_time;
      }
      const double rate = use_local_rate ? s.wifi_local_rate : s.backhaul_rate;
      p.hotspots.push_back(HotspotForecast{
          .hotspot_index = s.hotspot_index,
          .t_min = (1.0 - te) * s.duration,
          .t_max = (1.0 + te) * s.duration,
          .r_min = (1.0 - re) * rate,
          .r_max = (1.0 + re) * rate,
          .backhaul_min = (1.0 - re) * s.backhaul_rate,
      });
      continue;
    }
    const double from = std::max(now, s.start_time);
    const double span = s.end_time() - from;
    p.remaining_mobile_time += span;
    if (first_mobile_after == 0.0) first_mobile_after = s.mobile_rate;
    if (!seen_wifi) {
      stretch_time += span;
      stretch_mbit += span * s.mobile_rate;
      stretch_min_rate = std::min(stretch_min_rate, s.mobile_rate);
    }
  }

  p.time_to_next_wifi = std::max(0.0, next_wifi_start - now);
  if (stretch_time > 0.0) {
    p.max_mobile_rate = stretch_mbit / stretch_time;
    p.sustainable_mobile_rate = stretch_min_rate;
  } else {
    p.max_mobile_rate = first_mobile_after;
    p.sustainable_mobile_rate = first_mobile_after;
  }
  return p;
}

RouteProfile realize_route(const RouteProfile& route, const ErrorSpec& errors) {
  errors.validate();
  UniformStream stream(errors.seed);
  const double te = errors.time_error;
  const double re = errors.throughput_error;

  std::vector<RouteSegment> out;
  out.reserve(route.size());
  for (const auto& nominal : route.segments()) {
    RouteSegment s = nominal;
    s.duration = nominal.duration * (1.0 + te * stream.next_symmetric());
    if (s.is_wifi()) {
      s.wifi_local_rate = nominal.wifi_local_rate * (1.0 + re * stream.next_symmetric());
      s.backhaul_rate = nominal.backhaul_rate * (1.0 + re * stream.next_symmetric());
    } else {
      s.mobile_rate = nominal.mobile_rate * (1.0 + re * stream.next_symmetric());
    }
    out.push_back(s);
  }
  return RouteProfile::from_durations(std::move(out));
}

}  // namespace offload
