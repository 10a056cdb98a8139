#pragma once

#include <filesystem>
#include <string>

#include "offload/engine.hpp"
#include "offload/route.hpp"

namespace testsupport {

inline std::filesystem::path data_dir() { return OFFLOAD_DATA_DIR; }
inline std::filesystem::path scenario_dir() { return OFFLOAD_SCENARIO_DIR; }

inline offload::RouteSegment mobile(double duration, double rate) {
  offload::RouteSegment s;
  s.kind = offload::AccessKind::Mobile;
  s.duration = duration;
  s.mobile_rate = rate;
  return s;
}

inline offload::RouteSegment wifi(double duration, double local, double backhaul) {
  offload::RouteSegment s;
  s.kind = offload::AccessKind::WiFi;
  s.duration = duration;
  s.wifi_local_rate = local;
  s.backhaul_rate = backhaul;
  return s;
}

}  // namespace testsupport
