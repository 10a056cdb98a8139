#pragma once

#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "offload/model.hpp"
#include "offload/prediction.hpp"
#include "offload/range_set.hpp"

namespace offload {

enum class Policy {
  PrefetchDelayTolerant,
  PredictionOnlyDelayTolerant,
  NoPredictionOffload,
  PrefetchDelaySensitive,
  MobileOnly,
};

/// CLI spelling: prefetch-dt, prediction-dt, no-prediction, prefetch-ds,
/// mobile-only.
std::string_view to_string(Policy p);
Policy parse_policy(std::string_view name);

bool policy_admits(Policy p, TrafficClass c);
bool policy_uses_wifi(Policy p);

class PolicyClassMismatch : public std::invalid_argument {
 public:
  PolicyClassMismatch(Policy p, TrafficClass c);
};

struct TransferPlan {
  double mobile_rate = 0.0;  // Mbit/s
  double valid_from = 0.0;   // s
  /// Use whatever the mobile channel offers instead of capping at
  /// mobile_rate. Set for max-rate policies and for clamped plans.
  bool saturate = false;
  bool deadline_infeasible = false;
};

struct CachePlan {
  int hotspot_index = 0;
  double amount_mb = 0.0;
  double offset_mb = 0.0;  // absolute object position where the cache starts
};

struct ExitPlan {
  TransferPlan transfer;
  std::optional<CachePlan> cache;
};

/// Prefetch planner for delay-tolerant traffic, run at route start and at
/// every hotspot exit.
///
/// The remaining WiFi capacity is estimated pessimistically from the lower
/// duration and rate bounds of every future hotspot; whatever that leaves is
/// spread evenly over the predicted mobile-only time before the deadline.
/// The next hotspot caches as much as it could serve under the optimistic
/// bounds, starting where the node is expected to be on arrival.
///
/// `received_prefix_mb` is the contiguous prefix already at the node, and
/// `object_size_mb` bounds the cache at the object end.
ExitPlan plan_exit_delay_tolerant(double remaining_mb, double time_left,
                                  const PredictionProfile& pred,
                                  double received_prefix_mb = 0.0,
                                  double object_size_mb =
                                      std::numeric_limits<double>::infinity());

/// Same estimate with backhaul rates and no cache.
TransferPlan plan_exit_prediction_only(double remaining_mb, double time_left,
                                       const PredictionProfile& pred);

/// Delay-sensitive prefetching: full mobile rate, cache placed after the
/// bytes the node will pull over the mobile network before arrival.
ExitPlan plan_exit_delay_sensitive(double remaining_mb, double received_prefix_mb,
                                   const PredictionProfile& pred,
                                   double object_size_mb =
                                       std::numeric_limits<double>::infinity());

enum class Channel { Mobile, WiFiLocal, WiFiBackhaul };

std::string_view to_string(Channel c);

/// One step of the hotspot-entry procedure: fetch the missing parts of
/// [from_mb, to_mb) over `channel`.
struct EntryAction {
  Channel channel = Channel::WiFiBackhaul;
  double from_mb = 0.0;
  double to_mb = 0.0;
};

struct HotspotRates {
  double local = 0.0;     // Mbit/s
  double backhaul = 0.0;  // Mbit/s
};

/// Ordered actions on entering a hotspot: repair the gap up to the cache
/// offset from the origin, drain the local cache, then keep pulling from the
/// origin. Without a cache only the last step remains.
std::vector<EntryAction> plan_entry(const RangeSet& received,
                                    const std::optional<CachePlan>& cache,
                                    const HotspotRates& rates, double object_size_mb);

enum class PlanEvent { RouteStart, HotspotExit, HotspotEnter };

/// Everything a policy needs to know at an event.
struct PlanState {
  TransferTask task;
  const RangeSet* received = nullptr;
  double now = 0.0;       // realized time
  double time_left = 0.0; // to the deadline
  const PredictionProfile* local_prediction = nullptr;     // local-rate bounds
  const PredictionProfile* backhaul_prediction = nullptr;  // backhaul-rate bounds
  std::optional<CachePlan> cache;  // cache prepared for the hotspot being entered
  HotspotRates hotspot_rates;
};

struct PolicyPlans {
  std::optional<TransferPlan> transfer;
  std::optional<CachePlan> cache;
  std::vector<EntryAction> entry_actions;
};

/// Routes an event to the planner of `policy`. Throws PolicyClassMismatch
/// when the policy does not serve the task's traffic class.
PolicyPlans policy_dispatch(Policy policy, PlanEvent event, const PlanState& state);

/// Floor on the predicted mobile-only time.
inline constexpr double kMinMobileTime = 1e-6;

}  // namespace offload
