#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "etcsim/error.hpp"
#include "etcsim/trigger.hpp"

using namespace etcsim;

TEST_SUITE("trigger") {

TEST_CASE("first evaluation always transmits") {
  TriggerChannel ch;
  ch.threshold = 0.001;
  const auto [value, fired] = check_and_update(ch, 0.0, 0.0);
  CHECK(fired);
  CHECK(value == 0.0);
  CHECK(ch.event_times == std::vector<double>{0.0});
}

TEST_CASE("strict threshold comparison") {
  TriggerChannel ch;
  ch.threshold = 0.001;
  check_and_update(ch, 0.0, 0.0);

  SUBCASE("below threshold holds") {
    const auto [value, fired] = check_and_update(ch, 0.0005, 0.1);
    CHECK_FALSE(fired);
    CHECK(value == 0.0);
  }
  SUBCASE("above threshold fires and replaces the held value") {
    const auto [value, fired] = check_and_update(ch, 0.0011, 0.1);
    CHECK(fired);
    CHECK(value == 0.0011);
    CHECK(ch.held_value == 0.0011);
  }
  SUBCASE("exactly at threshold holds (strict inequality)") {
    const auto [value, fired] = check_and_update(ch, 0.001, 0.1);
    CHECK_FALSE(fired);
    CHECK(value == 0.0);
  }
}

TEST_CASE("time regression is rejected") {
  TriggerChannel ch;
  ch.threshold = 0.5;
  check_and_update(ch, 0.0, 1.0);
  try {
    check_and_update(ch, 10.0, 0.5);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::time_regression);
  }
}

TEST_CASE("held value is bit-exact between events") {
  TriggerChannel ch;
  ch.threshold = 0.01;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> step(-0.004, 0.004);
  double signal = 0.2;
  double held = 0.0;
  bool first = true;
  for (int m = 0; m < 2000; ++m) {
    const auto [value, fired] = check_and_update(ch, signal, m * 1e-3);
    if (first || fired) {
      held = value;
      first = false;
    } else {
      CHECK(value == held);  // zero-order hold, no drift
    }
    CHECK(std::abs(signal - value) <= ch.threshold);
    signal += step(rng);
  }
  CHECK(ch.event_times.size() >= 2);
}

TEST_CASE("inter-event statistics") {
  TriggerChannel ch;
  ch.threshold = 1.0;
  SUBCASE("empty log") {
    const auto stats = inter_event_stats(ch, 0.0, 1.0);
    CHECK(stats.count == 0);
    CHECK(std::isinf(stats.min_gap));
  }
  SUBCASE("three events at 0, 0.1, 0.3") {
    ch.event_times = {0.0, 0.1, 0.3};
    ch.event_values = {0.0, 2.0, 4.0};
    const auto stats = inter_event_stats(ch, 0.0, 1.0);
    CHECK(stats.count == 3);
    CHECK(stats.min_gap == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(stats.mean_gap == doctest::Approx(0.15).epsilon(1e-15));
  }
  SUBCASE("horizon filtering") {
    ch.event_times = {0.0, 0.1, 0.3, 0.9};
    ch.event_values = {0.0, 2.0, 4.0, 6.0};
    const auto stats = inter_event_stats(ch, 0.05, 0.5);
    CHECK(stats.count == 2);
    CHECK(stats.min_gap == doctest::Approx(0.2).epsilon(1e-15));
  }
}

TEST_CASE("zeno certificate") {
  TriggerChannel ch;
  ch.threshold = 0.001;
  CHECK(zeno_certificate(ch, 2.0) == doctest::Approx(0.0005).epsilon(1e-18));
  TriggerChannel wide = ch;
  wide.threshold = 0.002;
  CHECK(zeno_certificate(wide, 2.0) ==
        doctest::Approx(2.0 * zeno_certificate(ch, 2.0)).epsilon(1e-18));
  try {
    zeno_certificate(ch, 0.0);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::zero_rate_bound);
  }
}

}  // TEST_SUITE
