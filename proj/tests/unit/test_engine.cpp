#include <doctest.h>

#include "offload/engine.hpp"
#include "offload/oracle.hpp"
#include "offload/rng.hpp"
#include "support.hpp"

using namespace offload;
using testsupport::mobile;
using testsupport::wifi;

namespace {

RouteProfile defaults() { return scale_route(default_route_4ap(), 1.0 / 3, 1.0 / 3, 1.0 / 3); }

}  // namespace

TEST_SUITE("engine") {

TEST_CASE("integrate_segment") {
  SUBCASE("unit arithmetic") {
    TransferState s(100);
    CHECK(integrate_segment(s, 8, 10, Channel::Mobile) == doctest::Approx(10));
    CHECK(s.mobile_mb == doctest::Approx(10));
    CHECK_FALSE(s.complete());
  }
  SUBCASE("crossing time is interpolated") {
    TransferState s(1);
    CHECK(integrate_segment(s, 8, 10, Channel::WiFiLocal, 5.0) == doctest::Approx(1));
    CHECK(s.wifi_local_mb == doctest::Approx(1));
    REQUIRE(s.complete());
    CHECK(*s.completion_time == doctest::Approx(6));
  }
  SUBCASE("zero rate leaves the state alone") {
    TransferState s(1);
    CHECK(integrate_segment(s, 0, 10, Channel::Mobile) == 0);
    CHECK(s.channel_total() == 0);
    CHECK(s.received.measure() == 0);
  }
  SUBCASE("range restricted fill stops at the range end") {
    TransferState s(10);
    const double used = integrate_segment(s, 8, 10, Channel::WiFiLocal, 4, 6, 0);
    CHECK(used == doctest::Approx(2));
    CHECK(s.prefix() == 0);
    CHECK(s.received.covers(4, 6));
    CHECK(integrate_segment(s, 8, 10, Channel::WiFiBackhaul, 0) == doctest::Approx(8));
    CHECK(s.complete());
    CHECK(s.channel_total() == doctest::Approx(10));
  }
}

TEST_CASE("mobile-only over the full-rate route matches piecewise integration") {
  const auto r = default_route_4ap();
  const TransferTask task(50, 269, TrafficClass::DelaySensitive);
  const auto out = run_trip(r, r, task, Policy::MobileOnly, ErrorSpec{});
  // 36 s at 4.83 (hotspot 1 inherits it), then 4.58 Mbit/s.
  const double expected = 36 + (400 - 36 * 4.83) / 4.58;
  CHECK(out.transfer_delay == doctest::Approx(expected).epsilon(1e-9));
  CHECK(out.mobile_mb == doctest::Approx(50));
  CHECK(out.offload_pct == 0);
  const auto ref = run_trip_stepped(r, r, task, Policy::MobileOnly, ErrorSpec{}, 0.01);
  CHECK(std::abs(ref.transfer_delay - out.transfer_delay) <= 0.001 * out.transfer_delay);
}

TEST_CASE("prefetch 60 MB at defaults with exact predictions") {
  const auto r = defaults();
  const TransferTask task(60, 269, TrafficClass::DelayTolerant);
  const auto out = run_trip(r, r, task, Policy::PrefetchDelayTolerant, ErrorSpec{});
  CHECK(out.completed);
  CHECK(out.deadline_met);
  CHECK(out.transfer_delay <= 269 + 1e-9);
  CHECK(out.mobile_mb == doctest::Approx(9.8475).epsilon(1e-6));
  CHECK(out.wifi_local_mb == doctest::Approx(50.1525).epsilon(1e-6));
  CHECK(out.wifi_backhaul_mb == doctest::Approx(0).epsilon(1e-9));
  CHECK_FALSE(out.plan_infeasible);
  const auto ref =
      run_trip_stepped(r, r, task, Policy::PrefetchDelayTolerant, ErrorSpec{}, 0.01);
  CHECK(ref.mobile_mb == doctest::Approx(out.mobile_mb).epsilon(1e-3));
}

TEST_CASE("tiny object") {
  const auto r = defaults();
  for (auto p : {Policy::NoPredictionOffload, Policy::MobileOnly}) {
    const auto out = run_trip(r, r, TransferTask(0.001, 269, TrafficClass::DelayTolerant), p, {});
    CHECK(out.completed);
    CHECK(out.transfer_delay < 0.01);
    CHECK(out.offload_pct == 0);
  }
  const auto ds = run_trip(r, r, TransferTask(0.001, 1, TrafficClass::DelaySensitive),
                           Policy::PrefetchDelaySensitive, {});
  CHECK(ds.transfer_delay < 0.01);
  CHECK(ds.offload_pct == 0);

  // A delay-tolerant planner holds the bytes for the first hotspot instead.
  const auto dt = run_trip(r, r, TransferTask(0.001, 269, TrafficClass::DelayTolerant),
                           Policy::PrefetchDelayTolerant, {});
  CHECK(dt.offload_pct == doctest::Approx(100));
  CHECK(dt.transfer_delay == doctest::Approx(18).epsilon(1e-3));

  const auto w = RouteProfile::from_durations({wifi(10, 8, 4), mobile(10, 2)});
  const auto out = run_trip(w, w, TransferTask(0.001, 20, TrafficClass::DelayTolerant),
                            Policy::NoPredictionOffload, {});
  CHECK(out.offload_pct == 100);
  CHECK(out.transfer_delay < 0.01);
}

TEST_CASE("energy accounting") {
  EnergyModel m;
  SUBCASE("all mobile") {
    ActivityTimeline t;
    t.end_time = 100;
    t.mobile_mb = 60;
    CHECK(account_energy(t, m).total() == doctest::Approx(6000));
    const auto r = default_route_4ap();
    const auto out = run_trip(r, r, TransferTask(60, 269, TrafficClass::DelaySensitive),
                              Policy::MobileOnly, {});
    CHECK(out.energy_j() == doctest::Approx(6000));
  }
  SUBCASE("one idle hotspot") {
    ActivityTimeline t;
    t.end_time = 200;
    t.visits.push_back({50, 68});
    const auto e = account_energy(t, m);
    CHECK(e.wifi_idle_j == doctest::Approx(0.77 * (20 + 18)));
    CHECK(e.wifi_transfer_j == 0);
  }
  SUBCASE("zero-length trip") {
    ActivityTimeline t;
    t.visits.push_back({0, 18});
    CHECK(account_energy(t, m).total() == 0);
  }
  SUBCASE("overlapping pre-activation windows are counted once") {
    ActivityTimeline t;
    t.end_time = 100;
    t.visits = {{25, 30}, {40, 45}};
    CHECK(wifi_on_time(t, 20) == doctest::Approx(45 - 5));
  }
  SUBCASE("busy time is not idle") {
    ActivityTimeline t;
    t.end_time = 100;
    t.visits = {{30, 40}};
    t.wifi_mb = 2;
    t.wifi_busy_s = 4;
    const auto e = account_energy(t, m);
    CHECK(e.wifi_transfer_j == doctest::Approx(10));
    CHECK(e.wifi_idle_j == doctest::Approx(0.77 * 26));
  }
  SUBCASE("mobile idle power, when configured, runs for the whole transfer") {
    EnergyModel w = m;
    w.mobile_idle_w = 0.5;
    ActivityTimeline t;
    t.end_time = 10;
    CHECK(account_energy(t, w).mobile_idle_j == doctest::Approx(5));
  }
}

TEST_CASE("trip never reaching completion") {
  const auto r = defaults();
  const auto out = run_trip(r, r, TransferTask(1000, 269, TrafficClass::DelayTolerant),
                            Policy::NoPredictionOffload, {});
  CHECK_FALSE(out.completed);
  CHECK_FALSE(out.deadline_met);
  CHECK(out.transfer_delay == doctest::Approx(269));
}

TEST_CASE("structure mismatch and class mismatch are rejected") {
  const auto r = defaults();
  const auto other = RouteProfile::from_durations({mobile(10, 1)});
  const TransferTask task(10, 269, TrafficClass::DelayTolerant);
  CHECK_THROWS_AS(run_trip(other, r, task, Policy::MobileOnly, {}), std::invalid_argument);
  CHECK_THROWS_AS(run_trip(r, r, task, Policy::PrefetchDelaySensitive, {}), PolicyClassMismatch);
}

TEST_CASE("trace records one plan per replanning event") {
  const auto r = defaults();
  RunTrace trace;
  run_trip(r, r, TransferTask(60, 269, TrafficClass::DelayTolerant),
           Policy::PrefetchDelayTolerant, {}, {}, &trace);
  CHECK(trace.plans.size() == 5);  // start + 4 exits
  CHECK(trace.entries.size() == 4);
  CHECK(trace.plans.front().event == PlanEvent::RouteStart);
}

TEST_CASE("stepped oracle converges as the step shrinks") {
  const auto nominal = defaults();
  const ErrorSpec e{0.1, 0.2, run_seed(0, 3)};
  const auto realized = realize_route(nominal, e);
  const TransferTask task(50, 269, TrafficClass::DelaySensitive);
  const auto exact = run_trip(realized, nominal, task, Policy::PrefetchDelaySensitive, e);
  const auto coarse = compare_outcomes(
      exact, run_trip_stepped(realized, nominal, task, Policy::PrefetchDelaySensitive, e, 0.01),
      task.size_mb);
  const auto fine = compare_outcomes(
      exact, run_trip_stepped(realized, nominal, task, Policy::PrefetchDelaySensitive, e, 0.001),
      task.size_mb);
  CHECK(fine.completion_s <= coarse.completion_s);
  CHECK(fine.completion_s <= 0.001 + 1e-9);
  CHECK(within_oracle_tolerance(coarse));
}

}
