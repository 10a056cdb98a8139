#include "offload/metrics.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <iomanip>
#include <locale>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "offload/rng.hpp"

namespace offload {

double mean_of(std::span<const double> samples) {
  if (samples.empty()) return 0.0;
  double sum = 0.0;
  for (double x : samples) sum += x;
  return sum / static_cast<double>(samples.size());
}

double ci_halfwidth(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 2) throw InsufficientSamples();
  if (std::ranges::all_of(samples, [&](double x) { return x == samples.front(); })) return 0.0;
  const double m = mean_of(samples);
  double ss = 0.0;
  for (double x : samples) ss += (x - m) * (x - m);
  const double s = std::sqrt(ss / static_cast<double>(n - 1));
  if (s == 0.0) return 0.0;
  const boost::math::students_t dist(static_cast<double>(n - 1));
  const double t = boost::math::quantile(dist, 0.975);
  return t * s / std::sqrt(static_cast<double>(n));
}

double relative_gain(double a_mean, double b_mean, Better direction) {
  if (b_mean == 0.0) throw std::domain_error("relative gain against a zero baseline");
  const double diff = direction == Better::Higher ? a_mean - b_mean : b_mean - a_mean;
  return diff / b_mean * 100.0;
}

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::OffloadPct: return "offload_pct";
    case Metric::DelayS: return "delay_s";
    case Metric::EnergyJ: return "energy_j";
    case Metric::MobileMb: return "mobile_mb";
    case Metric::CacheMb: return "cache_mb";
  }
  return "?";
}

Metric parse_metric(std::string_view name) {
  for (auto m : kAllMetrics) {
    if (to_string(m) == name) return m;
  }
  throw std::invalid_argument("unknown metric '" + std::string(name) + "'");
}

double metric_value(const RunOutcome& o, Metric m) {
  switch (m) {
    case Metric::OffloadPct: return o.offload_pct;
    case Metric::DelayS: return o.transfer_delay;
    case Metric::EnergyJ: return o.energy_j();
    case Metric::MobileMb: return o.mobile_mb;
    case Metric::CacheMb: return o.cache_bytes_used;
  }
  return 0.0;
}

RouteProfile ScenarioSpec::scaled_route() const {
  return scale_route(route, mobile_factor, wifi_factor, backhaul_factor);
}

void ScenarioSpec::validate() const {
  if (runs < 1) throw std::invalid_argument("run count must be >= 1");
  if (route.empty()) throw std::invalid_argument("scenario has no route");
  if (policies.empty()) throw std::invalid_argument("scenario lists no policies");
  if (!(task.size_mb > 0.0)) throw std::invalid_argument("task size must be > 0");
  errors.validate();
  energy.validate();
  for (auto p : policies) {
    if (!policy_admits(p, task.traffic_class)) throw PolicyClassMismatch(p, task.traffic_class);
  }
}

ScenarioSpec default_delay_tolerant_scenario() {
  ScenarioSpec s;
  s.id = "default-dt";
  s.route = default_route_4ap();
  s.task = TransferTask(60.0, s.route.total_time(), TrafficClass::DelayTolerant);
  s.policies = {Policy::PrefetchDelayTolerant, Policy::PredictionOnlyDelayTolerant,
                Policy::NoPredictionOffload};
  return s;
}

ScenarioSpec default_delay_sensitive_scenario() {
  ScenarioSpec s;
  s.id = "default-ds";
  s.route = default_route_4ap();
  s.task = TransferTask(50.0, s.route.total_time(), TrafficClass::DelaySensitive);
  s.policies = {Policy::PrefetchDelaySensitive, Policy::NoPredictionOffload,
                Policy::MobileOnly};
  return s;
}

const MetricStats& PolicyResult::at(Metric m) const {
  for (const auto& [metric, stats] : metrics) {
    if (metric == m) return stats;
  }
  throw std::out_of_range("metric not aggregated");
}

const PolicyResult& AggregateResult::at(Policy p) const {
  for (const auto& r : policies) {
    if (r.policy == p) return r;
  }
  throw std::out_of_range("policy not in result");
}

AggregateResult run_scenario(const ScenarioSpec& spec, const RunOptions& options) {
  spec.validate();
  const auto nominal = spec.scaled_route();
  const std::size_t runs = static_cast<std::size_t>(spec.runs);
  const std::size_t np = spec.policies.size();
  std::vector<RunOutcome> outcomes(runs * np);

  std::mutex observer_mutex;
  auto work = [&](std::size_t k) {
    ErrorSpec errors = spec.errors;
    errors.seed = run_seed(spec.errors.seed, k);
    const auto realized = realize_route(nominal, errors);
    for (std::size_t j = 0; j < np; ++j) {
      auto& o = outcomes[k * np + j];
      o = run_trip(realized, nominal, spec.task, spec.policies[j], errors, spec.energy);
      if (options.observer) {
        std::lock_guard lock(observer_mutex);
        options.observer(k, spec.policies[j], realized, o);
      }
    }
  };

  unsigned threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(runs)));
  if (threads == 1) {
    for (std::size_t k = 0; k < runs; ++k) work(k);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t k = w; k < runs; k += threads) work(k);
      });
    }
  }

  AggregateResult result;
  result.scenario_id = spec.id;
  for (std::size_t j = 0; j < np; ++j) {
    PolicyResult pr;
    pr.policy = spec.policies[j];
    for (auto m : kAllMetrics) {
      std::vector<double> xs(runs);
      for (std::size_t k = 0; k < runs; ++k) xs[k] = metric_value(outcomes[k * np + j], m);
      pr.metrics.emplace_back(m, MetricStats{mean_of(xs), runs > 1 ? ci_halfwidth(xs) : 0.0, runs});
    }
    for (std::size_t k = 0; k < runs; ++k) {
      const auto& o = outcomes[k * np + j];
      if (!o.deadline_met) ++pr.infeasible_count;
      if (o.plan_infeasible) ++pr.plan_infeasible_count;
    }
    result.policies.push_back(std::move(pr));
  }
  return result;
}

void write_csv_header(std::ostream& out) {
  out << "scenario_id,policy,metric,mean,ci95,n,infeasible_count\n";
}

void write_csv_rows(std::ostream& out, const AggregateResult& result,
                    std::span<const Metric> metrics) {
  std::ostringstream row;
  row.imbue(std::locale::classic());
  row << std::fixed << std::setprecision(6);
  for (const auto& pr : result.policies) {
    for (auto m : metrics) {
      const auto& st = pr.at(m);
      row << result.scenario_id << ',' << to_string(pr.policy) << ',' << to_string(m) << ','
          << st.mean << ',' << st.ci95 << ',' << st.n << ',' << pr.infeasible_count << '\n';
    }
  }
  out << row.str();
}

}  // namespace offload
