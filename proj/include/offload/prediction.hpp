#pragma once

#include <cstdint>
#include <vector>

#include "offload/route.hpp"

namespace offload {

/// Fractional half-widths of the uniform intervals around nominal segment
/// durations and rates, plus the seed of the realization stream.
struct ErrorSpec {
  double time_error = 0.0;
  double throughput_error = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct HotspotForecast {
  int hotspot_index = 0;
  double t_min = 0.0;  // s
  double t_max = 0.0;  // s
  double r_min = 0.0;  // Mbit/s; local or backhaul, see build_prediction
  double r_max = 0.0;  // Mbit/s
  double backhaul_min = 0.0;  // Mbit/s
};

/// What a planner knows about the rest of the trip from a given position.
struct PredictionProfile {
  std::vector<HotspotForecast> hotspots;  // future hotspots in route order
  double time_to_next_wifi = 0.0;         // s, nominal
  double remaining_mobile_time = 0.0;     // s, nominal
  /// Nominal mobile rate over the stretch before the next hotspot
  /// (time-weighted over that stretch).
  double max_mobile_rate = 0.0;
  /// Slowest nominal mobile segment before the next hotspot; a constant
  /// planned rate above this cannot be sustained over the stretch.
  double sustainable_mobile_rate = 0.0;

  std::size_t n_wifi() const { return hotspots.size(); }
};

/// Prediction for the node positioned at time `now` on the nominal route.
/// Hotspots starting at or after `now` are listed; `use_local_rate` selects
/// the local-cache rate (prefetching) or the backhaul rate (prediction only).
PredictionProfile build_prediction(const RouteProfile& route, double now,
                                   const ErrorSpec& errors, bool use_local_rate);

/// Perturbed route: each duration and each rate is multiplied by an
/// independent factor drawn uniformly from [1-e, 1+e].
///
/// Draws are consumed in a fixed order (per segment: duration, then the
/// segment's rates) from a stream keyed by `errors.seed` alone, so the same
/// seed at different error magnitudes yields coupled realizations.
RouteProfile realize_route(const RouteProfile& route, const ErrorSpec& errors);

}  // namespace offload
