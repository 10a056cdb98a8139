#pragma once

#include <optional>
#include <vector>

#include "offload/model.hpp"
#include "offload/prediction.hpp"
#include "offload/range_set.hpp"
#include "offload/route.hpp"
#include "offload/schedulers.hpp"

namespace offload {

/// Byte accounting of one object transfer.
struct TransferState {
  explicit TransferState(double object_size_mb) : object_size_mb(object_size_mb) {}

  double object_size_mb;
  RangeSet received;
  double mobile_mb = 0.0;
  double wifi_local_mb = 0.0;
  double wifi_backhaul_mb = 0.0;
  std::optional<double> completion_time;

  double channel_total() const { return mobile_mb + wifi_local_mb + wifi_backhaul_mb; }
  double prefix() const { return received.prefix(); }
  double remaining() const { return received.missing_in(0.0, object_size_mb); }
  bool complete() const { return completion_time.has_value(); }
};

/// Fluid transfer over `channel` at `rate` for at most `duration` seconds
/// starting at `start_time`, filling the lowest missing positions of
/// [from_mb, to_mb). Returns the seconds actually used, which is shorter
/// than `duration` when the range (or the object) runs out first.
double integrate_segment(TransferState& state, double rate, double duration,
                         Channel channel, double from_mb, double to_mb,
                         double start_time);

/// Convenience overload: fill anywhere in the object.
double integrate_segment(TransferState& state, double rate, double duration,
                         Channel channel, double start_time = 0.0);

struct HotspotVisit {
  double entry = 0.0;
  double exit = 0.0;
};

/// Radio activity needed for energy accounting.
struct ActivityTimeline {
  double end_time = 0.0;  // completion, or end of route
  double mobile_mb = 0.0;
  double wifi_mb = 0.0;
  double wifi_busy_s = 0.0;  // seconds spent transferring over WiFi
  std::vector<HotspotVisit> visits;  // hotspots reached by a WiFi-using policy
};

struct EnergyBreakdown {
  double mobile_transfer_j = 0.0;
  double mobile_idle_j = 0.0;
  double wifi_transfer_j = 0.0;
  double wifi_idle_j = 0.0;

  double total() const {
    return mobile_transfer_j + mobile_idle_j + wifi_transfer_j + wifi_idle_j;
  }
};

/// Seconds the WiFi interface is powered: the union over visits of
/// [entry - preactivation, exit], clipped to [0, end_time].
double wifi_on_time(const ActivityTimeline& timeline, double preactivation_s);

EnergyBreakdown account_energy(const ActivityTimeline& timeline, const EnergyModel& model);

struct RunOutcome {
  double offload_pct = 0.0;
  double transfer_delay = 0.0;  // completion time, or route end when incomplete
  bool completed = false;
  bool deadline_met = false;
  bool plan_infeasible = false;  // some plan raised DeadlineInfeasible
  double mobile_mb = 0.0;
  double wifi_local_mb = 0.0;
  double wifi_backhaul_mb = 0.0;
  double cache_bytes_used = 0.0;    // MB served from hotspot caches
  double cache_provisioned_mb = 0.0;
  EnergyBreakdown energy;

  double energy_j() const { return energy.total(); }
  double received_mb() const { return mobile_mb + wifi_local_mb + wifi_backhaul_mb; }
};

/// Optional record of every planning decision taken during a trip.
struct RunTrace {
  struct PlanRecord {
    PlanEvent event = PlanEvent::RouteStart;
    double time = 0.0;
    std::size_t next_segment = 0;
    double prefix_mb = 0.0;
    double remaining_mb = 0.0;
    double time_to_next_wifi = 0.0;
    TransferPlan transfer;
    std::optional<CachePlan> cache;
  };
  struct EntryRecord {
    double time = 0.0;
    int hotspot_index = 0;
    double prefix_mb = 0.0;
    std::vector<EntryAction> actions;
  };
  std::vector<PlanRecord> plans;
  std::vector<EntryRecord> entries;
};

/// Executes one trip along `realized` while the policy plans from
/// `nominal`. Both routes must have the same segment structure.
RunOutcome run_trip(const RouteProfile& realized, const RouteProfile& nominal,
                    const TransferTask& task, Policy policy, const ErrorSpec& errors,
                    const EnergyModel& energy = {}, RunTrace* trace = nullptr);

/// Completion tolerance on remaining object size (MB).
inline constexpr double kCompletionEpsilon = 1e-9;

}  // namespace offload
