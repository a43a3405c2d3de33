#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace etcsim {

// One agent's nonaffine chain: xdot_k = f_k(x_check_k, x_{k+1}) with
// x_{n+1} = u. Definitions are immutable and shared across agents; plant
// state lives with the engine.
struct PureFeedbackPlant {
  std::string name;
  std::size_t order = 0;
  // f[k-1] takes (x_check_k = x[0..k-1], next state or input).
  using LevelFn = std::function<double(std::span<const double>, double)>;
  std::vector<LevelFn> f;
};

// Built-in plant registry ("paper_sec5", "double_integrator", "scalar_linear").
const PureFeedbackPlant& find_plant(std::string_view name);
std::vector<std::string> plant_names();

struct PlantState {
  std::vector<double> x;
  double t = 0.0;
};

std::vector<double> plant_derivative(const PureFeedbackPlant& plant,
                                     std::span<const double> x, double u);
std::vector<double> plant_derivative(const PureFeedbackPlant& plant,
                                     const PlantState& state, double u);
void plant_derivative_into(const PureFeedbackPlant& plant,
                           std::span<const double> x, double u,
                           std::span<double> out);

// Multiplicative partial-effectiveness fault: eta(t) is 1 up to tau_f, then
// blends to eta_target over ramp_width seconds (cosine ramp). ramp_width 0
// reproduces the hard switch.
struct SensorFaultModel {
  double eta_target = 1.0;
  double tau_f = 0.0;
  double ramp_width = 0.1;
  double eta_lower = 0.0;  // assumed strict lower bound on eta(t)
  double eta_dot_bound = std::numeric_limits<double>::infinity();

  double eta(double t) const;
  double eta_dot_max() const;  // analytic sup of |d eta / dt|
};

double apply_sensor_fault(double x, double t, const SensorFaultModel& fault);

// Sector envelope constants for one level. The unprimed group covers
// v >= 0, the primed group v < 0.
struct SectorBounds {
  double ell_lower = 0.0;
  double ell_upper = 0.0;
  double phi_k1 = 0.0;
  double phi_k2 = 0.0;
  double ell_lower_prime = 0.0;
  double ell_upper_prime = 0.0;
  double phi_k1_prime = 0.0;
  double phi_k2_prime = 0.0;
};

// lo/hi have level entries for x_check followed by one entry for v.
struct OperatingBox {
  std::vector<double> lo;
  std::vector<double> hi;
};

struct SectorReport {
  bool holds = false;
  double worst_violation = 0.0;  // <= 0 means the envelope held everywhere sampled
};

// Samples h = f_level(x_check, v) - f_level(x_check, 0) over the box and
// reports the largest signed violation of the sector inequalities. Advisory:
// never aborts a run. samples must be >= 10000; the v axis additionally gets
// a deterministic sweep including the box edges.
SectorReport check_sector_bounds(const PureFeedbackPlant& plant,
                                 std::size_t level, const SectorBounds& bounds,
                                 const OperatingBox& box, std::size_t samples,
                                 std::uint64_t seed);

}  // namespace etcsim
