#include "offload/schedulers.hpp"

#include <algorithm>
#include <string>

namespace offload {

namespace {

struct WifiEstimate {
  double min_mb = 0.0;
  double min_time = 0.0;
};

WifiEstimate estimate_wifi(const PredictionProfile& pred) {
  WifiEstimate e;
  for (const auto& h : pred.hotspots) {
    e.min_mb += mbit_to_mb(h.r_min * h.t_min);
    e.min_time += h.t_min;
  }
  return e;
}

TransferPlan mobile_rate_for(double remaining_mb, double time_left,
                             const PredictionProfile& pred) {
  const auto wifi = estimate_wifi(pred);
  const double mobile_mb = std::max(0.0, remaining_mb - wifi.min_mb);
  const double mobile_time = std::max(kMinMobileTime, time_left - wifi.min_time);
  const double wanted = mb_to_mbit(mobile_mb) / mobile_time;

  TransferPlan plan;
  if (mobile_mb > 0.0 && wanted > pred.sustainable_mobile_rate) {
    plan.deadline_infeasible = true;
    plan.saturate = true;
    plan.mobile_rate = pred.max_mobile_rate;
  } else {
    plan.mobile_rate = std::min(wanted, pred.max_mobile_rate);
  }
  return plan;
}

std::optional<CachePlan> next_cache(const PredictionProfile& pred, double mobile_rate,
                                    double received_prefix_mb, double object_size_mb) {
  if (pred.hotspots.empty()) return std::nullopt;
  const auto& next = pred.hotspots.front();
  CachePlan cache;
  cache.hotspot_index = next.hotspot_index;
  cache.offset_mb = received_prefix_mb + mbit_to_mb(mobile_rate * pred.time_to_next_wifi);
  const double capacity = mbit_to_mb(next.r_max * next.t_max);
  cache.amount_mb = std::clamp(object_size_mb - cache.offset_mb, 0.0, capacity);
  return cache;
}

}  // namespace

std::string_view to_string(Policy p) {
  switch (p) {
    case Policy::PrefetchDelayTolerant: return "prefetch-dt";
    case Policy::PredictionOnlyDelayTolerant: return "prediction-dt";
    case Policy::NoPredictionOffload: return "no-prediction";
    case Policy::PrefetchDelaySensitive: return "prefetch-ds";
    case Policy::MobileOnly: return "mobile-only";
  }
  return "?";
}

Policy parse_policy(std::string_view name) {
  for (auto p : {Policy::PrefetchDelayTolerant, Policy::PredictionOnlyDelayTolerant,
                 Policy::NoPredictionOffload, Policy::PrefetchDelaySensitive,
                 Policy::MobileOnly}) {
    if (to_string(p) == name) return p;
  }
  throw std::invalid_argument("unknown policy '" + std::string(name) + "'");
}

std::string_view to_string(Channel c) {
  switch (c) {
    case Channel::Mobile: return "mobile";
    case Channel::WiFiLocal: return "wifi-local";
    case Channel::WiFiBackhaul: return "wifi-backhaul";
  }
  return "?";
}

bool policy_admits(Policy p, TrafficClass c) {
  switch (p) {
    case Policy::PrefetchDelayTolerant:
    case Policy::PredictionOnlyDelayTolerant:
      return c == TrafficClass::DelayTolerant;
    case Policy::PrefetchDelaySensitive:
      return c == TrafficClass::DelaySensitive;
    case Policy::NoPredictionOffload:
    case Policy::MobileOnly:
      return true;
  }
  return false;
}

bool policy_uses_wifi(Policy p) { return p != Policy::MobileOnly; }

PolicyClassMismatch::PolicyClassMismatch(Policy p, TrafficClass c)
    : std::invalid_argument("policy " + std::string(to_string(p)) +
                            " does not serve " + std::string(to_string(c)) +
                            " traffic") {}

ExitPlan plan_exit_delay_tolerant(double remaining_mb, double time_left,
                                  const PredictionProfile& pred, double received_prefix_mb,
                                  double object_size_mb) {
  ExitPlan out;
  out.transfer = mobile_rate_for(remaining_mb, time_left, pred);
  out.cache = next_cache(pred, out.transfer.mobile_rate, received_prefix_mb, object_size_mb);
  if (remaining_mb <= 0.0 && out.cache) out.cache->amount_mb = 0.0;
  return out;
}

TransferPlan plan_exit_prediction_only(double remaining_mb, double time_left,
                                       const PredictionProfile& pred) {
  return mobile_rate_for(remaining_mb, time_left, pred);
}

ExitPlan plan_exit_delay_sensitive(double remaining_mb, double received_prefix_mb,
                                   const PredictionProfile& pred, double object_size_mb) {
  ExitPlan out;
  out.transfer.mobile_rate = pred.max_mobile_rate;
  out.transfer.saturate = true;
  out.cache = next_cache(pred, out.transfer.mobile_rate, received_prefix_mb, object_size_mb);
  if (remaining_mb <= 0.0 && out.cache) out.cache->amount_mb = 0.0;
  return out;
}

std::vector<EntryAction> plan_entry(const RangeSet& received,
                                    const std::optional<CachePlan>& cache,
                                    const HotspotRates& rates, double object_size_mb) {
  (void)rates;
  std::vector<EntryAction> actions;
  const double prefix = received.prefix();
  if (cache && cache->amount_mb > 0.0) {
    actions.push_back({Channel::WiFiBackhaul, prefix, std::max(prefix, cache->offset_mb)});
    actions.push_back({Channel::WiFiLocal, cache->offset_mb,
                       std::min(object_size_mb, cache->offset_mb + cache->amount_mb)});
  }
  actions.push_back({Channel::WiFiBackhaul, prefix, object_size_mb});
  return actions;
}

PolicyPlans policy_dispatch(Policy policy, PlanEvent event, const PlanState& state) {
  if (!policy_admits(policy, state.task.traffic_class)) {
    throw PolicyClassMismatch(policy, state.task.traffic_class);
  }
  const double size = state.task.size_mb;
  const double received_mb = state.received ? state.received->measure() : 0.0;
  const double prefix = state.received ? state.received->prefix() : 0.0;
  const double remaining = std::max(0.0, size - received_mb);
  const RangeSet empty;
  const RangeSet& received = state.received ? *state.received : empty;

  PolicyPlans out;
  if (event == PlanEvent::HotspotEnter) {
    switch (policy) {
      case Policy::MobileOnly:
        break;
      case Policy::NoPredictionOffload:
      case Policy::PredictionOnlyDelayTolerant:
        out.entry_actions = plan_entry(received, std::nullopt, state.hotspot_rates, size);
        break;
      case Policy::PrefetchDelayTolerant:
      case Policy::PrefetchDelaySensitive:
        out.entry_actions = plan_entry(received, state.cache, state.hotspot_rates, size);
        break;
    }
    return out;
  }

  auto need = [](const PredictionProfile* p) -> const PredictionProfile& {
    if (!p) throw std::invalid_argument("planner requires a prediction profile");
    return *p;
  };

  switch (policy) {
    case Policy::MobileOnly:
    case Policy::NoPredictionOffload: {
      TransferPlan t;
      const auto* pred = state.local_prediction ? state.local_prediction
                                                : state.backhaul_prediction;
      t.mobile_rate = pred ? pred->max_mobile_rate : 0.0;
      t.saturate = true;
      out.transfer = t;
      break;
    }
    case Policy::PredictionOnlyDelayTolerant:
      out.transfer = plan_exit_prediction_only(remaining, state.time_left,
                                               need(state.backhaul_prediction));
      break;
    case Policy::PrefetchDelayTolerant: {
      auto plan = plan_exit_delay_tolerant(remaining, state.time_left,
                                           need(state.local_prediction), prefix, size);
      out.transfer = plan.transfer;
      out.cache = plan.cache;
      break;
    }
    case Policy::PrefetchDelaySensitive: {
      auto plan = plan_exit_delay_sensitive(remaining, prefix, need(state.local_prediction),
                                            size);
      out.transfer = plan.transfer;
      out.cache = plan.cache;
      break;
    }
  }
  if (out.transfer) out.transfer->valid_from = state.now;
  return out;
}

}  // namespace offload
