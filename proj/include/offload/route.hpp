#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace offload {

enum class AccessKind { Mobile, WiFi };

std::string_view to_string(AccessKind kind);

/// Megabytes to megabits (1 MB = 10^6 bytes = 8 Mbit).
constexpr double mb_to_mbit(double mb) { return mb * 8.0; }
constexpr double mbit_to_mb(double mbit) { return mbit / 8.0; }

struct RouteSegment {
  AccessKind kind = AccessKind::Mobile;
  double start_time = 0.0;  // s from route origin
  double duration = 0.0;    // s
  double mobile_rate = 0.0;      // Mbit/s, Mobile segments
  double wifi_local_rate = 0.0;  // Mbit/s, WiFi segments (local cache)
  double backhaul_rate = 0.0;    // Mbit/s, WiFi segments (ADSL to origin)
  int hotspot_index = 0;         // 1-based ordinal, WiFi segments only

  double end_time() const { return start_time + duration; }
  bool is_wifi() const { return kind == AccessKind::WiFi; }
};

/// Ordered, contiguous timeline of connectivity segments.
///
/// The constructor checks contiguity, positive durations and positive rates,
/// and assigns hotspot ordinals in route order. Values are immutable once
/// built.
class RouteProfile {
 public:
  RouteProfile() = default;
  explicit RouteProfile(std::vector<RouteSegment> segments);

  /// Builds a route from (kind, duration, rates) entries; start times are
  /// accumulated from zero.
  static RouteProfile from_durations(std::vector<RouteSegment> segments);

  std::span<const RouteSegment> segments() const { return segments_; }
  const RouteSegment& operator[](std::size_t i) const { return segments_[i]; }
  std::size_t size() const { return segments_.size(); }
  bool empty() const { return segments_.empty(); }
  double total_time() const { return total_time_; }
  int hotspot_count() const { return hotspot_count_; }

  /// Index of the segment containing time t (segment starts are inclusive).
  std::optional<std::size_t> segment_at(double t) const;

  /// Mobile rate available while in segment i. WiFi windows have no measured
  /// mobile rate; they inherit the nearest preceding mobile segment, or the
  /// following one when none precedes.
  double mobile_rate_during(std::size_t i) const;

  /// Same segment kinds in the same order.
  bool same_structure(const RouteProfile& other) const;

  friend bool operator==(const RouteProfile& a, const RouteProfile& b);

 private:
  std::vector<RouteSegment> segments_;
  double total_time_ = 0.0;
  int hotspot_count_ = 0;
};

bool operator==(const RouteSegment& a, const RouteSegment& b);

/// Multiplies every mobile, local WiFi, and backhaul rate by its factor.
RouteProfile scale_route(const RouteProfile& route, double mobile_factor,
                         double wifi_factor, double backhaul_factor);

/// The bundled four-hotspot route (Table I of the measurement campaign),
/// with segments renumbered contiguously.
RouteProfile default_route_4ap();

}  // namespace offload
