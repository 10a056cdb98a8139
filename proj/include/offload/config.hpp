#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "offload/metrics.hpp"
#include "offload/model.hpp"
#include "offload/route.hpp"

namespace offload {

/// Bad or unreadable configuration. The message names the file and the
/// offending field (or the parser's line/column).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<SnrBand> load_snr_table(const std::filesystem::path& path);
EnergyModel load_energy_model(const std::filesystem::path& path);

/// Loads a route file. WiFi segments give either explicit rates or an
/// `snr_db` value resolved through `snr_table` (the bundled table when
/// omitted).
RouteProfile load_route(const std::filesystem::path& path,
                        const std::vector<SnrBand>& snr_table = default_snr_table());

/// Parses rate factors written as numbers or as "M/3", "W", "A/2", ...
double parse_rate_factor(const std::string& text);

enum class SweepParameter {
  Size,
  MobileFactor,
  WiFiFactor,
  BackhaulFactor,
  TimeError,
  ThroughputError,
  HotspotCount,
};

std::string_view to_string(SweepParameter p);
SweepParameter parse_sweep_parameter(std::string_view name);

struct SweepSpec {
  SweepParameter parameter = SweepParameter::Size;
  std::vector<double> values;
  std::vector<std::string> labels;  // as written in the file
};

/// A scenario file: base scenario, optional sweep, and the metrics to report.
struct Experiment {
  std::string comment;
  ScenarioSpec base;
  int hotspot_count = 4;
  std::optional<SweepSpec> sweep;
  std::vector<Metric> metrics;
  std::map<int, RouteProfile> routes_by_hotspots;
};

/// Command-line overrides applied to the base scenario.
struct Overrides {
  std::optional<std::vector<Policy>> policies;
  std::optional<int> runs;
  std::optional<std::uint64_t> seed;
  std::optional<double> time_error;
  std::optional<double> throughput_error;
};

Experiment load_experiment(const std::filesystem::path& path);

void apply_overrides(Experiment& experiment, const Overrides& overrides);

/// One ScenarioSpec per sweep value (or just the base when there is no
/// sweep). Ids are "<base id>/<parameter>=<label>".
std::vector<ScenarioSpec> expand(const Experiment& experiment);

/// Default value lists of each sweepable parameter.
std::vector<double> default_sweep_values(SweepParameter p);

}  // namespace offload
