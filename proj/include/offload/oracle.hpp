#pragma once

#include <cstddef>
#include <vector>

#include "offload/engine.hpp"
#include "offload/metrics.hpp"

namespace offload {

/// Brute-force reference for run_trip: advances the trip in fixed steps of
/// `dt` seconds (clipped at segment boundaries, where events fire).
/// Completion is stamped at the end of the step that delivers the last
/// byte. Shares the planners and the
/// event rules with the analytic engine, but none of its integration code.
RunOutcome run_trip_stepped(const RouteProfile& realized, const RouteProfile& nominal,
                            const TransferTask& task, Policy policy,
                            const ErrorSpec& errors, double dt,
                            const EnergyModel& energy = {});

struct OracleDeviation {
  double bytes_mb = 0.0;      // max over channels of |engine - oracle|
  double bytes_rel = 0.0;     // bytes_mb relative to the object size
  double completion_s = 0.0;  // |delay difference|
};

OracleDeviation compare_outcomes(const RunOutcome& engine, const RunOutcome& oracle,
                                 double object_size_mb);

inline constexpr double kOracleBytesTolerance = 1e-3;  // relative to object size
inline constexpr double kOracleTimeTolerance = 0.05;   // s

struct SeedDeviation {
  std::size_t seed_index = 0;
  Policy policy = Policy::MobileOnly;
  OracleDeviation deviation;
};

/// Component-wise worst deviation per seed index over the scenario's
/// policies; `policy` is the one closest to failing. Seed k uses
/// the realization run k of run_scenario would use.
std::vector<SeedDeviation> check_against_oracle(const ScenarioSpec& spec, std::size_t seeds,
                                                double dt);

bool within_oracle_tolerance(const OracleDeviation& d);

}  // namespace offload
