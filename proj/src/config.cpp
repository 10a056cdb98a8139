#include "offload/config.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <sstream>

namespace offload {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open file");
  try {
    return json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

[[noreturn]] void fail(const fs::path& path, const std::string& field, const std::string& what) {
  throw ConfigError(path.string() + ": field '" + field + "': " + what);
}

double number(const json& j, const char* key, const fs::path& path, const std::string& where) {
  const auto field = where.empty() ? std::string(key) : where + "." + key;
  if (!j.contains(key)) fail(path, field, "missing");
  if (!j.at(key).is_number()) fail(path, field, "expected a number");
  return j.at(key).get<double>();
}

double optional_bound(const json& j, const char* key, double fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  return j.at(key).get<double>();
}

fs::path resolve(const fs::path& base_file, const std::string& rel) {
  fs::path p(rel);
  return p.is_absolute() ? p : base_file.parent_path() / p;
}

std::string format_label(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(10) << v;
  return os.str();
}

}  // namespace

std::vector<SnrBand> load_snr_table(const fs::path& path) {
  const auto j = read_json(path);
  if (!j.contains("bands") || !j["bands"].is_array()) fail(path, "bands", "expected an array");
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<SnrBand> table;
  for (std::size_t i = 0; i < j["bands"].size(); ++i) {
    const auto& b = j["bands"][i];
    const auto where = "bands[" + std::to_string(i) + "]";
    SnrBand band;
    band.lower_db = optional_bound(b, "lower_db", -inf);
    band.upper_db = optional_bound(b, "upper_db", inf);
    band.wifi_rate = number(b, "wifi_mbps", path, where);
    band.adsl_rate = number(b, "adsl_mbps", path, where);
    table.push_back(band);
  }
  try {
    validate_snr_table(table);
  } catch (const std::invalid_argument& e) {
    fail(path, "bands", e.what());
  }
  return table;
}

EnergyModel load_energy_model(const fs::path& path) {
  const auto j = read_json(path);
  EnergyModel m;
  for (const char* tech : {"mobile", "wifi"}) {
    if (!j.contains(tech) || !j[tech].is_object()) fail(path, tech, "expected an object");
  }
  m.mobile_transfer_j_per_mb = number(j["mobile"], "transfer_j_per_mb", path, "mobile");
  m.mobile_idle_w = j["mobile"].value("idle_w", 0.0);
  m.wifi_transfer_j_per_mb = number(j["wifi"], "transfer_j_per_mb", path, "wifi");
  m.wifi_idle_w = number(j["wifi"], "idle_w", path, "wifi");
  m.wifi_preactivation_s = number(j, "wifi_preactivation_s", path, "");
  try {
    m.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return m;
}

RouteProfile load_route(const fs::path& path, const std::vector<SnrBand>& snr_table) {
  const auto j = read_json(path);
  if (!j.contains("segments") || !j["segments"].is_array() || j["segments"].empty()) {
    fail(path, "segments", "expected a non-empty array");
  }
  const double total = number(j, "total_time", path, "");
  const auto& arr = j["segments"];
  std::vector<RouteSegment> segs;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& e = arr[i];
    const auto where = "segments[" + std::to_string(i) + "]";
    RouteSegment s;
    const auto access = e.value("access", std::string{});
    s.start_time = number(e, "start", path, where);
    if (access == "mobile") {
      s.kind = AccessKind::Mobile;
      s.mobile_rate = number(e, "mobile_mbps", path, where);
    } else if (access == "wifi") {
      s.kind = AccessKind::WiFi;
      if (e.contains("snr_db")) {
        const auto rates = snr_to_throughput(number(e, "snr_db", path, where), snr_table);
        s.wifi_local_rate = rates.wifi_rate;
        s.backhaul_rate = rates.adsl_rate;
      } else {
        s.wifi_local_rate = number(e, "wifi_mbps", path, where);
        s.backhaul_rate = number(e, "adsl_mbps", path, where);
      }
      if (s.wifi_local_rate < s.backhaul_rate) {
        fail(path, where, "local WiFi rate below backhaul rate");
      }
    } else {
      fail(path, where + ".access", "expected \"mobile\" or \"wifi\"");
    }
    segs.push_back(s);
  }
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const double next = i + 1 < segs.size() ? segs[i + 1].start_time : total;
    segs[i].duration = next - segs[i].start_time;
  }
  try {
    return RouteProfile(std::move(segs));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

double parse_rate_factor(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  }
  if (s.empty()) throw std::invalid_argument("empty rate factor");
  std::size_t pos = 0;
  if (s[0] == 'M' || s[0] == 'W' || s[0] == 'A') pos = 1;
  double numerator = 1.0;
  if (pos == 0) {
    std::size_t used = 0;
    numerator = std::stod(s, &used);
    pos = used;
  }
  if (pos == s.size()) return numerator;
  if (s[pos] != '/') throw std::invalid_argument("bad rate factor '" + text + "'");
  std::size_t used = 0;
  const auto rest = s.substr(pos + 1);
  const double denom = std::stod(rest, &used);
  if (used != rest.size() || !(denom > 0)) {
    throw std::invalid_argument("bad rate factor '" + text + "'");
  }
  return numerator / denom;
}

std::string_view to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::Size: return "size";
    case SweepParameter::MobileFactor: return "mobile_factor";
    case SweepParameter::WiFiFactor: return "wifi_factor";
    case SweepParameter::BackhaulFactor: return "backhaul_factor";
    case SweepParameter::TimeError: return "time_error";
    case SweepParameter::ThroughputError: return "throughput_error";
    case SweepParameter::HotspotCount: return "hotspot_count";
  }
  return "?";
}

SweepParameter parse_sweep_parameter(std::string_view name) {
  for (auto p : {SweepParameter::Size, SweepParameter::MobileFactor, SweepParameter::WiFiFactor,
                 SweepParameter::BackhaulFactor, SweepParameter::TimeError,
                 SweepParameter::ThroughputError, SweepParameter::HotspotCount}) {
    if (to_string(p) == name) return p;
  }
  throw std::invalid_argument("unknown sweep parameter '" + std::string(name) + "'");
}

std::vector<double> default_sweep_values(SweepParameter p) {
  switch (p) {
    case SweepParameter::Size: return {30, 40, 50, 60, 70};
    case SweepParameter::MobileFactor:
    case SweepParameter::WiFiFactor:
    case SweepParameter::BackhaulFactor: return {0.25, 1.0 / 3.0, 0.5, 1.0};
    case SweepParameter::TimeError: return {0.1, 0.2, 0.3, 0.4};
    case SweepParameter::ThroughputError: return {0.2, 0.4, 0.6, 0.8};
    case SweepParameter::HotspotCount: return {2, 4, 8};
  }
  return {};
}

Experiment load_experiment(const fs::path& path) {
  const auto j = read_json(path);
  if (!j.is_object()) throw ConfigError(path.string() + ": expected a JSON object");
  Experiment ex;
  auto& s = ex.base;
  try {
    ex.comment = j.value("comment", std::string{});
    s.id = j.value("id", path.stem().string());

    const auto snr = j.contains("snr_table")
                         ? load_snr_table(resolve(path, j["snr_table"].get<std::string>()))
                         : default_snr_table();
    if (!j.contains("route")) fail(path, "route", "missing");
    const auto route_path = resolve(path, j["route"].get<std::string>());
    s.route = load_route(route_path, snr);
    ex.hotspot_count = s.route.hotspot_count();
    if (j.contains("energy")) s.energy = load_energy_model(resolve(path, j["energy"].get<std::string>()));

    if (j.contains("rates")) {
      const auto& r = j["rates"];
      auto factor = [&](const char* key, double fallback) {
        if (!r.contains(key)) return fallback;
        try {
          return r[key].is_number() ? r[key].get<double>()
                                    : parse_rate_factor(r[key].get<std::string>());
        } catch (const std::exception& e) {
          fail(path, std::string("rates.") + key, e.what());
        }
      };
      s.mobile_factor = factor("mobile", s.mobile_factor);
      s.wifi_factor = factor("wifi", s.wifi_factor);
      s.backhaul_factor = factor("backhaul", s.backhaul_factor);
    }

    if (!j.contains("task") || !j["task"].is_object()) fail(path, "task", "expected an object");
    const auto& t = j["task"];
    const auto cls = t.value("class", std::string("delay-tolerant"));
    TrafficClass tc;
    if (cls == "delay-tolerant") {
      tc = TrafficClass::DelayTolerant;
    } else if (cls == "delay-sensitive") {
      tc = TrafficClass::DelaySensitive;
    } else {
      fail(path, "task.class", "expected \"delay-tolerant\" or \"delay-sensitive\"");
    }
    const double size = number(t, "size_mb", path, "task");
    const double threshold = t.contains("delay_threshold_s")
                                 ? number(t, "delay_threshold_s", path, "task")
                                 : s.route.total_time();
    if (!(size > 0)) fail(path, "task.size_mb", "must be > 0");
    if (!(threshold > 0)) fail(path, "task.delay_threshold_s", "must be > 0");
    s.task = TransferTask(size, threshold, tc);

    if (j.contains("errors")) {
      s.errors.time_error = number(j["errors"], "time", path, "errors");
      s.errors.throughput_error = number(j["errors"], "throughput", path, "errors");
    }
    s.errors.seed = j.value("seed", std::uint64_t{0});
    s.runs = j.value("runs", 120);

    if (!j.contains("policies") || !j["policies"].is_array()) {
      fail(path, "policies", "expected an array");
    }
    for (const auto& p : j["policies"]) {
      try {
        s.policies.push_back(parse_policy(p.get<std::string>()));
      } catch (const std::invalid_argument& e) {
        fail(path, "policies", e.what());
      }
    }

    if (j.contains("metrics")) {
      for (const auto& m : j["metrics"]) {
        try {
          ex.metrics.push_back(parse_metric(m.get<std::string>()));
        } catch (const std::invalid_argument& e) {
          fail(path, "metrics", e.what());
        }
      }
    }
    if (ex.metrics.empty()) ex.metrics.assign(std::begin(kAllMetrics), std::end(kAllMetrics));

    if (j.contains("sweep")) {
      const auto& sw = j["sweep"];
      SweepSpec spec;
      try {
        spec.parameter = parse_sweep_parameter(sw.value("parameter", std::string{}));
      } catch (const std::invalid_argument& e) {
        fail(path, "sweep.parameter", e.what());
      }
      if (!sw.contains("values")) {
        spec.values = default_sweep_values(spec.parameter);
        for (double v : spec.values) spec.labels.push_back(format_label(v));
      } else {
        if (!sw["values"].is_array() || sw["values"].empty()) {
          fail(path, "sweep.values", "must be a non-empty array");
        }
        for (const auto& v : sw["values"]) {
          if (v.is_number()) {
            spec.values.push_back(v.get<double>());
            spec.labels.push_back(format_label(v.get<double>()));
          } else if (v.is_string()) {
            try {
              spec.values.push_back(parse_rate_factor(v.get<std::string>()));
            } catch (const std::exception& e) {
              fail(path, "sweep.values", e.what());
            }
            spec.labels.push_back(v.get<std::string>());
          } else {
            fail(path, "sweep.values", "expected numbers or rate factors");
          }
        }
      }
      if (spec.parameter == SweepParameter::HotspotCount) {
        for (double v : spec.values) {
          const int n = static_cast<int>(std::lround(v));
          const std::string key = std::to_string(n);
          fs::path rp;
          if (j.contains("routes_by_hotspots") && j["routes_by_hotspots"].contains(key)) {
            rp = resolve(path, j["routes_by_hotspots"][key].get<std::string>());
          } else {
            rp = route_path.parent_path() / ("route_" + key + "ap.json");
          }
          ex.routes_by_hotspots[n] = load_route(rp, snr);
        }
      }
      ex.sweep = std::move(spec);
    }
    s.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return ex;
}

void apply_overrides(Experiment& ex, const Overrides& o) {
  auto& s = ex.base;
  if (o.policies) s.policies = *o.policies;
  if (o.runs) s.runs = *o.runs;
  if (o.seed) s.errors.seed = *o.seed;
  if (o.time_error) s.errors.time_error = *o.time_error;
  if (o.throughput_error) s.errors.throughput_error = *o.throughput_error;
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("override: ") + e.what());
  }
}

std::vector<ScenarioSpec> expand(const Experiment& ex) {
  if (!ex.sweep) return {ex.base};
  std::vector<ScenarioSpec> out;
  const auto& sw = *ex.sweep;
  for (std::size_t i = 0; i < sw.values.size(); ++i) {
    ScenarioSpec s = ex.base;
    const double v = sw.values[i];
    s.id = ex.base.id + "/" + std::string(to_string(sw.parameter)) + "=" + sw.labels[i];
    switch (sw.parameter) {
      case SweepParameter::Size: s.task.size_mb = v; break;
      case SweepParameter::MobileFactor: s.mobile_factor = v; break;
      case SweepParameter::WiFiFactor: s.wifi_factor = v; break;
      case SweepParameter::BackhaulFactor: s.backhaul_factor = v; break;
      case SweepParameter::TimeError: s.errors.time_error = v; break;
      case SweepParameter::ThroughputError: s.errors.throughput_error = v; break;
      case SweepParameter::HotspotCount: {
        const int n = static_cast<int>(std::lround(v));
        const auto it = ex.routes_by_hotspots.find(n);
        if (it == ex.routes_by_hotspots.end()) {
          throw ConfigError("no route for " + std::to_string(n) + " hotspots");
        }
        s.route = it->second;
        if (s.task.traffic_class == TrafficClass::DelayTolerant &&
            s.task.delay_threshold == ex.base.route.total_time()) {
          s.task.delay_threshold = s.route.total_time();
        }
        break;
      }
    }
    try {
      s.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(s.id + ": " + e.what());
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace offload
