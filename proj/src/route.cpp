#include "offload/route.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace offload {

namespace {

constexpr double kContiguityTolerance = 1e-9;

void check_segment(const RouteSegment& s, std::size_t i) {
  const auto where = "segment " + std::to_string(i);
  if (!(s.duration > 0.0) || !std::isfinite(s.duration)) {
    throw std::invalid_argument(where + ": duration must be > 0");
  }
  if (s.kind == AccessKind::Mobile) {
    if (!(s.mobile_rate > 0.0)) {
      throw std::invalid_argument(where + ": mobile rate must be > 0");
    }
  } else {
    if (!(s.wifi_local_rate > 0.0) || !(s.backhaul_rate > 0.0)) {
      throw std::invalid_argument(where + ": WiFi and backhaul rates must be > 0");
    }
  }
}

}  // namespace

std::string_view to_string(AccessKind kind) {
  return kind == AccessKind::Mobile ? "mobile" : "wifi";
}

RouteProfile::RouteProfile(std::vector<RouteSegment> segments)
    : segments_(std::move(segments)) {
  double expected_start = segments_.empty() ? 0.0 : segments_.front().start_time;
  if (!segments_.empty() && std::abs(expected_start) > kContiguityTolerance) {
    throw std::invalid_argument("route must start at time 0");
  }
  int hotspot = 0;
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    auto& s = segments_[i];
    check_segment(s, i);
    if (std::abs(s.start_time - expected_start) > kContiguityTolerance) {
      throw std::invalid_argument("segment " + std::to_string(i) +
                                  ": start time does not continue the previous segment");
    }
    s.start_time = expected_start;
    if (s.is_wifi()) {
      s.hotspot_index = ++hotspot;
    } else {
      s.hotspot_index = 0;
    }
    expected_start += s.duration;
  }
  total_time_ = expected_start;
  hotspot_count_ = hotspot;
}

RouteProfile RouteProfile::from_durations(std::vector<RouteSegment> segments) {
  double t = 0.0;
  for (auto& s : segments) {
    s.start_time = t;
    t += s.duration;
  }
  return RouteProfile(std::move(segments));
}

std::optional<std::size_t> RouteProfile::segment_at(double t) const {
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    if (t < segments_[i].end_time()) {
      return t >= segments_[i].start_time ? std::optional<std::size_t>(i) : std::nullopt;
    }
  }
  return std::nullopt;
}

double RouteProfile::mobile_rate_during(std::size_t i) const {
  if (segments_[i].kind == AccessKind::Mobile) return segments_[i].mobile_rate;
  for (std::size_t j = i; j-- > 0;) {
    if (segments_[j].kind == AccessKind::Mobile) return segments_[j].mobile_rate;
  }
  for (std::size_t j = i + 1; j < segments_.size(); ++j) {
    if (segments_[j].kind == AccessKind::Mobile) return segments_[j].mobile_rate;
  }
  return 0.0;
}

bool RouteProfile::same_structure(const RouteProfile& other) const {
  if (size() != other.size()) return false;
  for (std::size_t i = 0; i < size(); ++i) {
    if (segments_[i].kind != other.segments_[i].kind) return false;
  }
  return true;
}

bool operator==(const RouteSegment& a, const RouteSegment& b) {
  return a.kind == b.kind && a.start_time == b.start_time && a.duration == b.duration &&
         a.mobile_rate == b.mobile_rate && a.wifi_local_rate == b.wifi_local_rate &&
         a.backhaul_rate == b.backhaul_rate && a.hotspot_index == b.hotspot_index;
}

bool operator==(const RouteProfile& a, const RouteProfile& b) {
  return a.total_time_ == b.total_time_ && a.segments_ == b.segments_;
}

RouteProfile scale_route(const RouteProfile& route, double mobile_factor,
                         double wifi_factor, double backhaul_factor) {
  if (!(mobile_factor > 0.0) || !(wifi_factor > 0.0) || !(backhaul_factor > 0.0)) {
    throw std::invalid_argument("scale factors must be > 0");
  }
  std::vector<RouteSegment> out(route.segments().begin(), route.segments().end());
  for (auto& s : out) {
    s.mobile_rate *= mobile_factor;
    s.wifi_local_rate *= wifi_factor;
    s.backhaul_rate *= backhaul_factor;
  }
  return RouteProfile(std::move(out));
}

RouteProfile default_route_4ap() {
  auto mobile = [](double start, double rate) {
    RouteSegment s;
    s.kind = AccessKind::Mobile;
    s.start_time = start;
    s.mobile_rate = rate;
    return s;
  };
  auto wifi = [](double start, double local, double adsl) {
    RouteSegment s;
    s.kind = AccessKind::WiFi;
    s.start_time = start;
    s.wifi_local_rate = local;
    s.backhaul_rate = adsl;
    return s;
  };
  std::vector<RouteSegment> segs{
      mobile(0, 4.83),   wifi(18, 16.16, 6.81), mobile(36, 4.58),
      wifi(90, 16.74, 8.37), mobile(108, 6.1),  wifi(162, 16.74, 8.37),
      mobile(180, 5.62), wifi(234, 17.23, 9.46), mobile(252, 5.82),
  };
  constexpr double kTotal = 269.0;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const double next = i + 1 < segs.size() ? segs[i + 1].start_time : kTotal;
    segs[i].duration = next - segs[i].start_time;
  }
  return RouteProfile(std::move(segs));
}

}  // namespace offload
