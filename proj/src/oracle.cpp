#include "offload/oracle.hpp"

#include "offload/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

namespace offload {

namespace {

constexpr double kEps = 1e-9;

// Deliberately naive interval list, kept separate from RangeSet.
class Coverage {
 public:
  double missing(double lo, double hi) const {
    double covered = 0.0;
    for (const auto& [a, b] : iv_) covered += std::max(0.0, std::min(b, hi) - std::max(a, lo));
    return std::max(0.0, hi - lo - covered);
  }

  double add_lowest(double lo, double hi, double amount) {
    double added = 0.0;
    double cursor = lo;
    std::vector<std::pair<double, double>> fresh;
    for (const auto& [a, b] : iv_) {
      if (added >= amount || cursor >= hi) break;
      if (b <= cursor) continue;
      if (a > cursor) {
        const double take = std::min({a, hi} ) - cursor;
        const double t = std::min(take, amount - added);
        if (t > 0) fresh.emplace_back(cursor, cursor + t);
        added += std::max(0.0, t);
      }
      cursor = std::max(cursor, b);
    }
    if (added < amount && cursor < hi) {
      const double t = std::min(hi - cursor, amount - added);
      fresh.emplace_back(cursor, cursor + t);
      added += t;
    }
    iv_.insert(iv_.end(), fresh.begin(), fresh.end());
    std::sort(iv_.begin(), iv_.end());
    std::vector<std::pair<double, double>> merged;
    for (const auto& p : iv_) {
      if (!merged.empty() && p.first <= merged.back().second + kEps) {
        merged.back().second = std::max(merged.back().second, p.second);
      } else {
        merged.push_back(p);
      }
    }
    iv_ = std::move(merged);
    return added;
  }

  RangeSet as_range_set() const {
    RangeSet r;
    for (const auto& [a, b] : iv_) r.insert(a, b);
    return r;
  }

 private:
  std::vector<std::pair<double, double>> iv_;
};

}  // namespace

RunOutcome run_trip_stepped(const RouteProfile& realized, const RouteProfile& nominal,
                            const TransferTask& task, Policy policy,
                            const ErrorSpec& errors, double dt, const EnergyModel& energy) {
  if (!(dt > 0.0)) throw std::invalid_argument("oracle step must be > 0");
  if (!realized.same_structure(nominal)) {
    throw std::invalid_argument("realized and nominal routes differ in structure");
  }
  const double size = task.size_mb;
  Coverage got;
  double mobile = 0.0, local = 0.0, backhaul = 0.0, busy = 0.0, provisioned = 0.0;
  double completion = -1.0;
  bool infeasible = false;
  TransferPlan plan;
  std::optional<CachePlan> cache;

  auto replan = [&](PlanEvent ev, std::size_t next, double now) {
    const double pos = next < nominal.size() ? nominal[next].start_time : nominal.total_time();
    const auto lp = build_prediction(nominal, pos, errors, true);
    const auto bp = build_prediction(nominal, pos, errors, false);
    const RangeSet snapshot = got.as_range_set();
    PlanState ps;
    ps.task = task;
    ps.received = &snapshot;
    ps.now = now;
    ps.time_left = task.effective_threshold() - now;
    ps.local_prediction = &lp;
    ps.backhaul_prediction = &bp;
    const auto p = policy_dispatch(policy, ev, ps);
    plan = p.transfer.value_or(TransferPlan{});
    cache = p.cache;
    infeasible = infeasible || plan.deadline_infeasible;
  };
  auto done = [&] { return completion >= 0.0; };
  auto check_done = [&](double t) {
    if (!done() && got.missing(0.0, size) <= kEps) completion = t;
  };

  replan(PlanEvent::RouteStart, 0, 0.0);
  const bool wifi_policy = policy_uses_wifi(policy);
  for (std::size_t k = 0; k < realized.size() && !done(); ++k) {
    const auto& seg = realized[k];
    if (!seg.is_wifi() || !wifi_policy) {
      const double channel = realized.mobile_rate_during(k);
      const double rate = plan.saturate ? channel : std::min(plan.mobile_rate, channel);
      for (double t = 0.0; t < seg.duration && !done();) {
        const double h = std::min(dt, seg.duration - t);
        mobile += got.add_lowest(0.0, size, rate * h / 8.0);
        t += h;
        check_done(seg.start_time + t);
      }
      continue;
    }

    const RangeSet snapshot = got.as_range_set();
    PlanState ps;
    ps.task = task;
    ps.received = &snapshot;
    ps.now = seg.start_time;
    ps.time_left = task.effective_threshold() - seg.start_time;
    if (cache && cache->hotspot_index == seg.hotspot_index) ps.cache = cache;
    ps.hotspot_rates = {seg.wifi_local_rate, seg.backhaul_rate};
    const auto actions = policy_dispatch(policy, PlanEvent::HotspotEnter, ps).entry_actions;
    if (ps.cache) provisioned += ps.cache->amount_mb;

    // A phase that drains mid-step hands the rest of the step to the next.
    std::size_t phase = 0;
    for (double t = 0.0; t < seg.duration && !done() && phase < actions.size();) {
      const double h = std::min(dt, seg.duration - t);
      double budget = h;
      while (budget > 0.0) {
        while (phase < actions.size() &&
               got.missing(actions[phase].from_mb, std::min(actions[phase].to_mb, size)) <= kEps) {
          ++phase;
        }
        if (phase == actions.size()) break;
        const auto& a = actions[phase];
        const double rate = a.channel == Channel::WiFiLocal ? seg.wifi_local_rate
                                                            : seg.backhaul_rate;
        const double cap = rate * budget / 8.0;
        const double moved = got.add_lowest(a.from_mb, std::min(a.to_mb, size), cap);
        (a.channel == Channel::WiFiLocal ? local : backhaul) += moved;
        const double used = moved >= cap ? budget : moved * 8.0 / rate;
        busy += used;
        budget -= used;
        if (moved <= 0.0) ++phase;
      }
      t += h;
      check_done(seg.start_time + t);
    }
    if (!done() && k + 1 < realized.size()) {
      replan(PlanEvent::HotspotExit, k + 1, seg.end_time());
    }
  }

  RunOutcome out;
  out.completed = done();
  out.transfer_delay = out.completed ? completion : realized.total_time();
  out.deadline_met = out.completed && (task.traffic_class == TrafficClass::DelaySensitive ||
                                       completion <= task.delay_threshold + 1e-9);
  out.plan_infeasible = infeasible;
  out.mobile_mb = mobile;
  out.wifi_local_mb = local;
  out.wifi_backhaul_mb = backhaul;
  out.cache_bytes_used = local;
  out.cache_provisioned_mb = provisioned;
  out.offload_pct = std::clamp((local + backhaul) / size * 100.0, 0.0, 100.0);

  ActivityTimeline tl;
  tl.end_time = out.transfer_delay;
  tl.mobile_mb = mobile;
  tl.wifi_mb = local + backhaul;
  tl.wifi_busy_s = busy;
  if (wifi_policy) {
    for (const auto& seg : realized.segments()) {
      if (seg.is_wifi()) tl.visits.push_back({seg.start_time, seg.end_time()});
    }
  }
  out.energy = account_energy(tl, energy);
  return out;
}

OracleDeviation compare_outcomes(const RunOutcome& engine, const RunOutcome& oracle,
                                 double object_size_mb) {
  OracleDeviation d;
  d.bytes_mb = std::max({std::abs(engine.mobile_mb - oracle.mobile_mb),
                         std::abs(engine.wifi_local_mb - oracle.wifi_local_mb),
                         std::abs(engine.wifi_backhaul_mb - oracle.wifi_backhaul_mb)});
  d.bytes_rel = d.bytes_mb / object_size_mb;
  d.completion_s = std::abs(engine.transfer_delay - oracle.transfer_delay);
  return d;
}

bool within_oracle_tolerance(const OracleDeviation& d) {
  return d.bytes_rel <= kOracleBytesTolerance && d.completion_s <= kOracleTimeTolerance;
}

std::vector<SeedDeviation> check_against_oracle(const ScenarioSpec& spec, std::size_t seeds,
                                                double dt) {
  spec.validate();
  if (!(dt > 0)) throw std::invalid_argument("oracle step must be > 0");
  const auto nominal = spec.scaled_route();
  std::vector<SeedDeviation> out(seeds);
  auto work = [&](std::size_t k) {
    ErrorSpec errors = spec.errors;
    errors.seed = run_seed(spec.errors.seed, k);
    const auto realized = realize_route(nominal, errors);
    auto& worst = out[k];
    worst.seed_index = k;
    double worst_score = -1.0;
    for (Policy p : spec.policies) {
      const auto a = run_trip(realized, nominal, spec.task, p, errors, spec.energy);
      const auto b = run_trip_stepped(realized, nominal, spec.task, p, errors, dt, spec.energy);
      const auto d = compare_outcomes(a, b, spec.task.size_mb);
      const double score =
          std::max(d.bytes_rel / kOracleBytesTolerance, d.completion_s / kOracleTimeTolerance);
      if (score > worst_score) worst_score = score, worst.policy = p;
      worst.deviation.bytes_mb = std::max(worst.deviation.bytes_mb, d.bytes_mb);
      worst.deviation.bytes_rel = std::max(worst.deviation.bytes_rel, d.bytes_rel);
      worst.deviation.completion_s = std::max(worst.deviation.completion_s, d.completion_s);
    }
  };
  const unsigned threads =
      std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), static_cast<unsigned>(seeds)));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t k = w; k < seeds; k += threads) work(k);
      });
    }
  }
  return out;
}

}  // namespace offload
