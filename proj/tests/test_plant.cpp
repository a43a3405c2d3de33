#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "etcsim/error.hpp"
#include "etcsim/plant.hpp"

using namespace etcsim;

TEST_SUITE("plant") {

TEST_CASE("registry lookup") {
  const auto& p = find_plant("paper_sec5");
  CHECK(p.order == 2);
  CHECK(find_plant("double_integrator").order == 2);
  CHECK(find_plant("scalar_linear").order == 1);
  try {
    find_plant("no_such_plant");
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::unknown_plant);
    CHECK(std::string(e.what()).find("no_such_plant") != std::string::npos);
  }
}

TEST_CASE("demo plant derivative at hand-evaluated points") {
  const auto& p = find_plant("paper_sec5");

  CHECK(plant_derivative(p, std::vector<double>{0.0, 0.0}, 0.0) ==
        std::vector<double>{0.0, 0.0});

  const auto r1 = plant_derivative(p, std::vector<double>{0.1, 0.05}, 0.0);
  CHECK(r1[0] == doctest::Approx(0.150025).epsilon(1e-15));
  CHECK(r1[1] == doctest::Approx(0.005).epsilon(1e-15));

  const auto r2 = plant_derivative(p, std::vector<double>{1.0, 1.0}, 1.0);
  CHECK(r2[0] == doctest::Approx(2.2).epsilon(1e-15));
  CHECK(r2[1] == doctest::Approx(2.0 + 1.0 / 7.0).epsilon(1e-15));
  CHECK(r2[1] == doctest::Approx(2.142857142857143).epsilon(1e-12));

  PlantState state;
  state.x = {0.1, 0.05};
  state.t = 0.0;
  CHECK(plant_derivative(p, state, 0.0) == r1);
}

TEST_CASE("demo plant matches an independently coded evaluation on random points") {
  const auto& p = find_plant("paper_sec5");
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const double x1 = dist(rng), x2 = dist(rng), u = dist(rng);
    const auto r = plant_derivative(p, std::vector<double>{x1, x2}, u);
    const double expect1 = x1 + x2 + std::pow(x2, 3) / 5.0;
    const double expect2 = x1 * x2 + u + std::pow(u, 3) / 7.0;
    CHECK(r[0] == doctest::Approx(expect1).epsilon(1e-14));
    CHECK(r[1] == doctest::Approx(expect2).epsilon(1e-14));
  }
}

TEST_CASE("derivative validates dimensions") {
  const auto& p = find_plant("paper_sec5");
  CHECK_THROWS_AS(plant_derivative(p, std::vector<double>{1.0}, 0.0), Error);
}

TEST_CASE("sensor fault examples") {
  SensorFaultModel fault;
  fault.eta_target = 0.6;
  fault.tau_f = 1.0;
  fault.ramp_width = 0.0;  // hard switch reproduces the tabulated values

  CHECK(apply_sensor_fault(1.0, 0.5, fault) == 1.0);
  CHECK(apply_sensor_fault(1.0, 2.0, fault) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(apply_sensor_fault(0.0, 2.0, fault) == 0.0);
  CHECK(apply_sensor_fault(0.0, 0.1, fault) == 0.0);
}

TEST_CASE("fault is identity when eta is one") {
  SensorFaultModel healthy;  // eta_target defaults to 1
  healthy.tau_f = 0.0;
  for (double t : {0.0, 0.5, 10.0})
    CHECK(apply_sensor_fault(1.2345, t, healthy) == 1.2345);
}

TEST_CASE("fault is positively homogeneous in x") {
  SensorFaultModel fault;
  fault.eta_target = 0.7;
  fault.tau_f = 0.25;
  fault.ramp_width = 0.1;
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> dist(-5.0, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double x = dist(rng), c = dist(rng), t = 0.2 + 0.01 * trial;
    const double lhs = apply_sensor_fault(c * x, t, fault);
    const double rhs = c * apply_sensor_fault(x, t, fault);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-15));
  }
}

TEST_CASE("cosine ramp profile") {
  SensorFaultModel fault;
  fault.eta_target = 0.6;
  fault.tau_f = 1.0;
  fault.ramp_width = 0.1;

  CHECK(fault.eta(1.0) == 1.0);
  CHECK(fault.eta(1.1) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(fault.eta(1.05) == doctest::Approx(0.8).epsilon(1e-12));  // halfway blend
  // monotone decreasing across the ramp
  double prev = 1.0;
  for (int i = 1; i <= 100; ++i) {
    const double eta = fault.eta(1.0 + 0.001 * i);
    CHECK(eta <= prev + 1e-15);
    prev = eta;
  }
  // finite-difference slope stays below the analytic maximum
  const double analytic = fault.eta_dot_max();
  CHECK(analytic == doctest::Approx(0.4 * M_PI / 0.2).epsilon(1e-12));
  double max_fd = 0.0;
  for (int i = 0; i < 400; ++i) {
    const double t = 0.95 + i * 0.0005;
    max_fd = std::max(max_fd, std::abs(fault.eta(t + 0.0005) - fault.eta(t)) / 0.0005);
  }
  CHECK(max_fd <= analytic + 1e-9);
  CHECK(max_fd > 0.9 * analytic);
}

TEST_CASE("fault factor outside (0,1] is rejected") {
  SensorFaultModel bad;
  bad.eta_target = 1.5;
  bad.tau_f = 0.0;
  bad.ramp_width = 0.0;
  try {
    apply_sensor_fault(1.0, 1.0, bad);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::fault_factor_out_of_range);
  }
}

TEST_CASE("sector check on the demo plant, level 1") {
  const auto& p = find_plant("paper_sec5");
  // h(v) = v + v^3/5 on v in [0, 2]; x_check range irrelevant for h
  OperatingBox box;
  box.lo = {-1.0, 0.0};
  box.hi = {1.0, 2.0};

  SectorBounds slack_upper;  // lower inequality active, upper far away
  slack_upper.ell_lower = 1.0;
  slack_upper.phi_k1 = 0.0;
  slack_upper.ell_upper = 1e6;
  slack_upper.phi_k2 = 1e6;
  slack_upper.ell_lower_prime = 1.0;
  slack_upper.ell_upper_prime = 1.0;

  SUBCASE("lower envelope v <= h holds") {
    const auto report = check_sector_bounds(p, 1, slack_upper, box, 20000, 7);
    CHECK(report.holds);
    CHECK(report.worst_violation <= 1e-12);
  }

  SUBCASE("upper envelope with slope 1 fails at the box edge") {
    SectorBounds tight = slack_upper;
    tight.ell_lower = 1e-9;
    tight.phi_k1 = -1e6;
    tight.ell_upper = 1.0;
    tight.phi_k2 = 0.0;
    const auto report = check_sector_bounds(p, 1, tight, box, 20000, 7);
    CHECK_FALSE(report.holds);
    // worst violation h - v = v^3/5 at v = 2
    CHECK(report.worst_violation == doctest::Approx(1.6).epsilon(1e-12));
  }

  SUBCASE("upper envelope with slope 1 + v_max^2/5 holds") {
    SectorBounds wide = slack_upper;
    wide.ell_lower = 1e-9;
    wide.phi_k1 = -1e6;
    wide.ell_upper = 1.8;
    wide.phi_k2 = 0.0;
    const auto report = check_sector_bounds(p, 1, wide, box, 20000, 7);
    CHECK(report.holds);
  }
}

TEST_CASE("sector check over a sign-spanning box") {
  const auto& p = find_plant("paper_sec5");
  OperatingBox box;
  box.lo = {-3.0, -3.0};
  box.hi = {3.0, 3.0};
  SectorBounds b;
  b.ell_lower = 1.0;
  b.phi_k1 = 0.0;
  b.ell_upper = 2.81;
  b.phi_k2 = 0.0;
  b.ell_lower_prime = 1.0;
  b.phi_k1_prime = -5.5;
  b.ell_upper_prime = 1.0;
  b.phi_k2_prime = 0.0;
  const auto report = check_sector_bounds(p, 1, b, box, 20000, 11);
  CHECK(report.holds);
}

TEST_CASE("sector check input validation") {
  const auto& p = find_plant("paper_sec5");
  OperatingBox box;
  box.lo = {-1.0, 0.0};
  box.hi = {1.0, 2.0};
  SectorBounds b;
  b.ell_lower = b.ell_upper = b.ell_lower_prime = b.ell_upper_prime = 1.0;
  CHECK_THROWS_AS(check_sector_bounds(p, 1, b, box, 100, 1), Error);
  CHECK_THROWS_AS(check_sector_bounds(p, 3, b, box, 20000, 1), Error);
}

}  // TEST_SUITE
