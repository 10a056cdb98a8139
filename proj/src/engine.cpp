#include "offload/engine.hpp"

#include <algorithm>
#include <stdexcept>

namespace offload {

double integrate_segment(TransferState& state, double rate, double duration,
                         Channel channel, double from_mb, double to_mb,
                         double start_time) {
  if (state.complete() || !(rate > 0.0) || !(duration > 0.0)) return 0.0;
  to_mb = std::min(to_mb, state.object_size_mb);
  from_mb = std::max(from_mb, 0.0);
  const double capacity = mbit_to_mb(rate * duration);
  const double moved = state.received.fill_lowest(from_mb, to_mb, capacity);
  const double used = moved >= capacity ? duration : mb_to_mbit(moved) / rate;

  switch (channel) {
    case Channel::Mobile: state.mobile_mb += moved; break;
    case Channel::WiFiLocal: state.wifi_local_mb += moved; break;
    case Channel::WiFiBackhaul: state.wifi_backhaul_mb += moved; break;
  }
  if (state.remaining() <= kCompletionEpsilon) {
    state.completion_time = start_time + used;
  }
  return used;
}

double integrate_segment(TransferState& state, double rate, double duration,
                         Channel channel, double start_time) {
  return integrate_segment(state, rate, duration, channel, 0.0, state.object_size_mb,
                           start_time);
}

double wifi_on_time(const ActivityTimeline& timeline, double preactivation_s) {
  std::vector<HotspotVisit> windows;
  for (const auto& v : timeline.visits) {
    const double on = std::max(0.0, v.entry - preactivation_s);
    const double off = std::min(v.exit, timeline.end_time);
    if (off > on) windows.push_back({on, off});
  }
  std::sort(windows.begin(), windows.end(),
            [](const HotspotVisit& a, const HotspotVisit& b) { return a.entry < b.entry; });
  double total = 0.0;
  double cur_on = 0.0;
  double cur_off = -1.0;
  for (const auto& w : windows) {
    if (w.entry > cur_off) {
      if (cur_off > cur_on) total += cur_off - cur_on;
      cur_on = w.entry;
      cur_off = w.exit;
    } else {
      cur_off = std::max(cur_off, w.exit);
    }
  }
  if (cur_off > cur_on) total += cur_off - cur_on;
  return total;
}

EnergyBreakdown account_energy(const ActivityTimeline& timeline, const EnergyModel& model) {
  EnergyBreakdown e;
  e.mobile_transfer_j = model.mobile_transfer_j_per_mb * timeline.mobile_mb;
  e.wifi_transfer_j = model.wifi_transfer_j_per_mb * timeline.wifi_mb;
  // The mobile interface stays attached for the whole transfer.
  e.mobile_idle_j = model.mobile_idle_w * timeline.end_time;
  const double idle_s =
      std::max(0.0, wifi_on_time(timeline, model.wifi_preactivation_s) - timeline.wifi_busy_s);
  e.wifi_idle_j = model.wifi_idle_w * idle_s;
  return e;
}

namespace {

class TripRunner {
 public:
  TripRunner(const RouteProfile& realized, const RouteProfile& nominal,
             const TransferTask& task, Policy policy, const ErrorSpec& errors,
             RunTrace* trace)
      : realized_(realized),
        nominal_(nominal),
        task_(task),
        policy_(policy),
        errors_(errors),
        trace_(trace),
        state_(task.size_mb) {}

  void run() {
    replan(PlanEvent::RouteStart, 0, 0.0);
    const bool uses_wifi = policy_uses_wifi(policy_);
    for (std::size_t k = 0; k < realized_.size() && !state_.complete(); ++k) {
      const auto& seg = realized_[k];
      if (!seg.is_wifi() || !uses_wifi) {
        mobile_segment(k);
      } else {
        hotspot_segment(k);
        if (!state_.complete() && k + 1 < realized_.size()) {
          replan(PlanEvent::HotspotExit, k + 1, seg.end_time());
        }
      }
    }
  }

  RunOutcome outcome(const EnergyModel& energy) const {
    RunOutcome out;
    const double size = task_.size_mb;
    out.completed = state_.complete();
    out.transfer_delay = out.completed ? *state_.completion_time : realized_.total_time();
    out.deadline_met =
        out.completed && (task_.traffic_class == TrafficClass::DelaySensitive ||
                          *state_.completion_time <= task_.delay_threshold + 1e-9);
    out.plan_infeasible = infeasible_;
    out.mobile_mb = state_.mobile_mb;
    out.wifi_local_mb = state_.wifi_local_mb;
    out.wifi_backhaul_mb = state_.wifi_backhaul_mb;
    out.cache_bytes_used = state_.wifi_local_mb;
    out.cache_provisioned_mb = cache_provisioned_;
    out.offload_pct =
        std::clamp((state_.wifi_local_mb + state_.wifi_backhaul_mb) / size * 100.0, 0.0, 100.0);

    ActivityTimeline timeline;
    timeline.end_time = out.transfer_delay;
    timeline.mobile_mb = state_.mobile_mb;
    timeline.wifi_mb = state_.wifi_local_mb + state_.wifi_backhaul_mb;
    timeline.wifi_busy_s = wifi_busy_s_;
    if (policy_uses_wifi(policy_)) {
      // Clipping at end_time drops hotspots beyond completion but keeps the
      // pre-activation of one the node was approaching.
      for (const auto& seg : realized_.segments()) {
        if (seg.is_wifi()) timeline.visits.push_back({seg.start_time, seg.end_time()});
      }
    }
    out.energy = account_energy(timeline, energy);
    return out;
  }

 private:
  void replan(PlanEvent event, std::size_t next_segment, double now) {
    const double position = next_segment < nominal_.size()
                                ? nominal_[next_segment].start_time
                                : nominal_.total_time();
    const auto local = build_prediction(nominal_, position, errors_, true);
    const auto backhaul = build_prediction(nominal_, position, errors_, false);
    PlanState ps;
    ps.task = task_;
    ps.received = &state_.received;
    ps.now = now;
    ps.time_left = task_.effective_threshold() - now;
    ps.local_prediction = &local;
    ps.backhaul_prediction = &backhaul;
    auto plans = policy_dispatch(policy_, event, ps);
    plan_ = plans.transfer.value_or(TransferPlan{});
    cache_ = plans.cache;
    infeasible_ = infeasible_ || plan_.deadline_infeasible;
    if (trace_) {
      trace_->plans.push_back({event, now, next_segment, state_.prefix(), state_.remaining(),
                               local.time_to_next_wifi, plan_, cache_});
    }
  }

  void mobile_segment(std::size_t k) {
    const auto& seg = realized_[k];
    const double channel_rate = realized_.mobile_rate_during(k);
    const double rate =
        plan_.saturate ? channel_rate : std::min(plan_.mobile_rate, channel_rate);
    integrate_segment(state_, rate, seg.duration, Channel::Mobile, seg.start_time);
  }

  void hotspot_segment(std::size_t k) {
    const auto& seg = realized_[k];
    PlanState ps;
    ps.task = task_;
    ps.received = &state_.received;
    ps.now = seg.start_time;
    ps.time_left = task_.effective_threshold() - seg.start_time;
    if (cache_ && cache_->hotspot_index == seg.hotspot_index) ps.cache = cache_;
    ps.hotspot_rates = {seg.wifi_local_rate, seg.backhaul_rate};
    const auto plans = policy_dispatch(policy_, PlanEvent::HotspotEnter, ps);
    if (ps.cache) cache_provisioned_ += ps.cache->amount_mb;
    if (trace_) {
      trace_->entries.push_back(
          {seg.start_time, seg.hotspot_index, state_.prefix(), plans.entry_actions});
    }

    double clock = seg.start_time;
    double left = seg.duration;
    for (const auto& action : plans.entry_actions) {
      if (left <= 0.0 || state_.complete()) break;
      const double rate =
          action.channel == Channel::WiFiLocal ? seg.wifi_local_rate : seg.backhaul_rate;
      const double used = integrate_segment(state_, rate, left, action.channel,
                                            action.from_mb, action.to_mb, clock);
      wifi_busy_s_ += used;
      clock += used;
      left -= used;
    }
  }

  const RouteProfile& realized_;
  const RouteProfile& nominal_;
  const TransferTask& task_;
  Policy policy_;
  const ErrorSpec& errors_;
  RunTrace* trace_;

  TransferState state_;
  TransferPlan plan_;
  std::optional<CachePlan> cache_;
  bool infeasible_ = false;
  double wifi_busy_s_ = 0.0;
  double cache_provisioned_ = 0.0;
};

}  // namespace

RunOutcome run_trip(const RouteProfile& realized, const RouteProfile& nominal,
                    const TransferTask& task, Policy policy, const ErrorSpec& errors,
                    const EnergyModel& energy, RunTrace* trace) {
  if (!realized.same_structure(nominal)) {
    throw std::invalid_argument("realized and nominal routes differ in structure");
  }
  if (!policy_admits(policy, task.traffic_class)) {
    throw PolicyClassMismatch(policy, task.traffic_class);
  }
  TripRunner runner(realized, nominal, task, policy, errors, trace);
  runner.run();
  return runner.outcome(energy);
}

}  // namespace offload
