#include <doctest.h>

#include "offload/prediction.hpp"
#include "offload/rng.hpp"
#include "support.hpp"

using namespace offload;

namespace {

RouteProfile defaults() { return scale_route(default_route_4ap(), 1.0 / 3, 1.0 / 3, 1.0 / 3); }

}  // namespace

TEST_SUITE("prediction") {

TEST_CASE("zero error bounds equal the nominal route") {
  const auto r = defaults();
  const auto p = build_prediction(r, 0, ErrorSpec{}, true);
  REQUIRE(p.n_wifi() == 4);
  std::size_t h = 0;
  for (const auto& s : r.segments()) {
    if (!s.is_wifi()) continue;
    CHECK(p.hotspots[h].t_min == s.duration);
    CHECK(p.hotspots[h].t_max == s.duration);
    CHECK(p.hotspots[h].r_min == s.wifi_local_rate);
    CHECK(p.hotspots[h].r_max == s.wifi_local_rate);
    CHECK(p.hotspots[h].hotspot_index == s.hotspot_index);
    ++h;
  }
  CHECK(p.time_to_next_wifi == doctest::Approx(18));
  CHECK(p.remaining_mobile_time == doctest::Approx(197));
  CHECK(p.max_mobile_rate == doctest::Approx(4.83 / 3));
}

TEST_CASE("bounds around hotspot 2 seen from the exit of hotspot 1") {
  const auto p = build_prediction(defaults(), 36, ErrorSpec{0.1, 0.2, 0}, true);
  REQUIRE(p.n_wifi() == 3);
  const auto& h2 = p.hotspots.front();
  CHECK(h2.hotspot_index == 2);
  CHECK(h2.t_min == doctest::Approx(16.2));
  CHECK(h2.t_max == doctest::Approx(19.8));
  CHECK(h2.r_min == doctest::Approx(4.464));
  CHECK(h2.r_max == doctest::Approx(6.696));
  CHECK(p.time_to_next_wifi == doctest::Approx(54));
}

TEST_CASE("backhaul bounds for the prediction-only scheme") {
  const auto p = build_prediction(defaults(), 0, ErrorSpec{0, 0.2, 0}, false);
  CHECK(p.hotspots[0].r_min == doctest::Approx(0.8 * 6.81 / 3));
  CHECK(p.hotspots[0].r_max == doctest::Approx(1.2 * 6.81 / 3));
}

TEST_CASE("no hotspots left") {
  const auto r = defaults();
  const auto p = build_prediction(r, 252, ErrorSpec{0.1, 0.2, 0}, true);
  CHECK(p.n_wifi() == 0);
  CHECK(p.hotspots.empty());
  CHECK(p.time_to_next_wifi == doctest::Approx(17));
  CHECK(p.remaining_mobile_time == doctest::Approx(17));
  CHECK_THROWS_AS(build_prediction(r, 300, ErrorSpec{}, true), std::invalid_argument);
}

TEST_CASE("error fractions are validated") {
  CHECK_THROWS_AS((ErrorSpec{1.0, 0, 0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((ErrorSpec{0, -0.1, 0}.validate()), std::invalid_argument);
  CHECK_NOTHROW((ErrorSpec{0.99, 0.0, 0}.validate()));
}

TEST_CASE("zero error realization is the nominal route") {
  const auto r = defaults();
  CHECK(realize_route(r, ErrorSpec{0, 0, 1234}) == r);
}

TEST_CASE("realized values stay inside their intervals") {
  const auto r = defaults();
  const ErrorSpec e{0.1, 0.2, 0};
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    const auto x = realize_route(r, ErrorSpec{e.time_error, e.throughput_error, run_seed(7, seed)});
    REQUIRE(x.same_structure(r));
    for (std::size_t i = 0; i < r.size(); ++i) {
      const auto& n = r[i];
      const auto& s = x[i];
      REQUIRE(s.duration >= 0.9 * n.duration - 1e-12);
      REQUIRE(s.duration <= 1.1 * n.duration + 1e-12);
      if (n.is_wifi()) {
        REQUIRE(s.wifi_local_rate >= 0.8 * n.wifi_local_rate - 1e-12);
        REQUIRE(s.wifi_local_rate <= 1.2 * n.wifi_local_rate + 1e-12);
        REQUIRE(s.backhaul_rate >= 0.8 * n.backhaul_rate - 1e-12);
        REQUIRE(s.backhaul_rate <= 1.2 * n.backhaul_rate + 1e-12);
      } else {
        REQUIRE(s.mobile_rate >= 0.8 * n.mobile_rate - 1e-12);
        REQUIRE(s.mobile_rate <= 1.2 * n.mobile_rate + 1e-12);
      }
      if (i > 0) REQUIRE(s.start_time == doctest::Approx(x[i - 1].end_time()));
    }
  }
}

TEST_CASE("realized durations are unbiased") {
  const auto r = defaults();
  std::vector<double> sums(r.size(), 0.0);
  double rate_sum = 0.0;
  constexpr int n = 10000;
  for (int k = 0; k < n; ++k) {
    const auto x = realize_route(r, ErrorSpec{0.1, 0.2, run_seed(99, k)});
    for (std::size_t i = 0; i < r.size(); ++i) sums[i] += x[i].duration;
    rate_sum += x[0].mobile_rate;
  }
  for (std::size_t i = 0; i < r.size(); ++i) {
    CHECK(sums[i] / n == doctest::Approx(r[i].duration).epsilon(0.01));
  }
  CHECK(rate_sum / n == doctest::Approx(r[0].mobile_rate).epsilon(0.01));
}

TEST_CASE("time error 0.1 keeps durations within 10 percent over 1000 seeds") {
  const auto r = defaults();
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto x = realize_route(r, ErrorSpec{0.1, 0.0, seed});
    for (std::size_t i = 0; i < r.size(); ++i) {
      REQUIRE(std::abs(x[i].duration / r[i].duration - 1.0) <= 0.1 + 1e-12);
      REQUIRE(x[i].mobile_rate == r[i].mobile_rate);
    }
  }
}

TEST_CASE("realization is a pure function of the seed") {
  const auto r = defaults();
  const ErrorSpec e{0.3, 0.4, 42};
  CHECK(realize_route(r, e) == realize_route(r, e));
  CHECK_FALSE(realize_route(r, e) == realize_route(r, ErrorSpec{0.3, 0.4, 43}));
}

TEST_CASE("same seed at different error levels gives coupled draws") {
  const auto r = defaults();
  const auto a = realize_route(r, ErrorSpec{0.1, 0.2, 5});
  const auto b = realize_route(r, ErrorSpec{0.2, 0.4, 5});
  for (std::size_t i = 0; i < r.size(); ++i) {
    CHECK(b[i].duration / r[i].duration - 1.0 ==
          doctest::Approx(2.0 * (a[i].duration / r[i].duration - 1.0)));
  }
}

TEST_CASE("per-run seeds") {
  CHECK(run_seed(0, 0) != run_seed(0, 1));
  CHECK(run_seed(0, 0) != run_seed(1, 0));
  static_assert(run_seed(3, 4) == run_seed(3, 4));
  UniformStream u(1);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.next01();
    REQUIRE(x >= 0.0);
    REQUIRE(x < 1.0);
  }
}

}
