#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "offload/engine.hpp"

namespace offload {

class InsufficientSamples : public std::invalid_argument {
 public:
  InsufficientSamples() : std::invalid_argument("confidence interval needs n >= 2") {}
};

/// Two-sided 95% Student-t half-width, t(0.975, n-1) * s / sqrt(n).
double ci_halfwidth(std::span<const double> samples);

double mean_of(std::span<const double> samples);

enum class Better { Higher, Lower };

/// Percent advantage of a over b: (a-b)/b for higher-is-better metrics,
/// (b-a)/b for lower-is-better ones. Throws std::domain_error when b == 0.
double relative_gain(double a_mean, double b_mean, Better direction = Better::Higher);

enum class Metric { OffloadPct, DelayS, EnergyJ, MobileMb, CacheMb };

inline constexpr Metric kAllMetrics[] = {Metric::OffloadPct, Metric::DelayS, Metric::EnergyJ,
                                         Metric::MobileMb, Metric::CacheMb};

std::string_view to_string(Metric m);
Metric parse_metric(std::string_view name);
double metric_value(const RunOutcome& outcome, Metric m);

/// One Monte-Carlo experiment: a route, a task, an error model, and the
/// policies to compare on shared realizations.
struct ScenarioSpec {
  std::string id = "default";
  RouteProfile route;  // nominal, before rate scaling
  double mobile_factor = 1.0 / 3.0;
  double wifi_factor = 1.0 / 3.0;
  double backhaul_factor = 1.0 / 3.0;
  TransferTask task;
  ErrorSpec errors{0.10, 0.20, 0};
  std::vector<Policy> policies;
  int runs = 120;
  EnergyModel energy;

  RouteProfile scaled_route() const;
  void validate() const;
};

/// Defaults of the delay-tolerant and delay-sensitive experiments on the
/// bundled four-hotspot route.
ScenarioSpec default_delay_tolerant_scenario();
ScenarioSpec default_delay_sensitive_scenario();

struct MetricStats {
  double mean = 0.0;
  double ci95 = 0.0;
  std::size_t n = 0;
};

struct PolicyResult {
  Policy policy = Policy::MobileOnly;
  std::vector<std::pair<Metric, MetricStats>> metrics;
  std::size_t infeasible_count = 0;       // runs that missed the deadline
  std::size_t plan_infeasible_count = 0;  // runs where a plan was clamped

  const MetricStats& at(Metric m) const;
};

struct AggregateResult {
  std::string scenario_id;
  std::vector<PolicyResult> policies;

  const PolicyResult& at(Policy p) const;
};

/// Called once per (run, policy) with the realization the run used.
using RunObserver = std::function<void(std::size_t run, Policy policy,
                                       const RouteProfile& realized,
                                       const RunOutcome& outcome)>;

struct RunOptions {
  unsigned threads = 0;  // 0: hardware concurrency
  RunObserver observer;
};

/// Runs spec.runs realizations; run k draws its route from
/// run_seed(spec.errors.seed, k) and evaluates every policy on it.
AggregateResult run_scenario(const ScenarioSpec& spec, const RunOptions& options = {});

/// CSV header and rows: scenario_id,policy,metric,mean,ci95,n,infeasible_count.
void write_csv_header(std::ostream& out);
void write_csv_rows(std::ostream& out, const AggregateResult& result,
                    std::span<const Metric> metrics);

}  // namespace offload
