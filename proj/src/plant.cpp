#include "etcsim/plant.hpp"

#include <cmath>
#include <random>

#include "etcsim/error.hpp"

namespace etcsim {

namespace {

std::vector<PureFeedbackPlant> make_registry() {
  std::vector<PureFeedbackPlant> plants;

  {
    // Two-state demo system used throughout the test scenarios:
    //   xdot_1 = x1 + x2 + x2^3/5
    //   xdot_2 = x1 x2 + u + u^3/7
    PureFeedbackPlant p;
    p.name = "paper_sec5";
    p.order = 2;
    p.f = {
        [](std::span<const double> xs, double next) {
          return xs[0] + next + next * next * next / 5.0;
        },
        [](std::span<const double> xs, double next) {
          return xs[0] * xs[1] + next + next * next * next / 7.0;
        },
    };
    plants.push_back(std::move(p));
  }

  {
    PureFeedbackPlant p;
    p.name = "double_integrator";
    p.order = 2;
    p.f = {
        [](std::span<const double>, double next) { return next; },
        [](std::span<const double>, double next) { return next; },
    };
    plants.push_back(std::move(p));
  }

  {
    // Open-loop unstable scalar chain, handy for order-1 tests.
    PureFeedbackPlant p;
    p.name = "scalar_linear";
    p.order = 1;
    p.f = {
        [](std::span<const double> xs, double next) { return xs[0] + next; },
    };
    plants.push_back(std::move(p));
  }

  return plants;
}

const std::vector<PureFeedbackPlant>& registry() {
  static const std::vector<PureFeedbackPlant> plants = make_registry();
  return plants;
}

inline double unit_real(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

const PureFeedbackPlant& find_plant(std::string_view name) {
  for (const auto& p : registry())
    if (p.name == name) return p;
  std::string known;
  for (const auto& p : registry()) {
    if (!known.empty()) known += ", ";
    known += p.name;
  }
  raise(ErrorCode::unknown_plant,
        "unknown plant '" + std::string(name) + "' (known: " + known + ")");
}

std::vector<std::string> plant_names() {
  std::vector<std::string> names;
  for (const auto& p : registry()) names.push_back(p.name);
  return names;
}

void plant_derivative_into(const PureFeedbackPlant& plant,
                           std::span<const double> x, double u,
                           std::span<double> out) {
  const std::size_t n = plant.order;
  if (x.size() != n || out.size() != n)
    raise(ErrorCode::dimension_mismatch,
          "plant_derivative: state size does not match plant order");
  for (std::size_t k = 0; k < n; ++k) {
    const double next = (k + 1 < n) ? x[k + 1] : u;
    const double rate = plant.f[k](x.first(k + 1), next);
    if (!std::isfinite(rate))
      raise(ErrorCode::non_finite_derivative,
            "plant '" + plant.name + "' produced a non-finite rate at level " +
                std::to_string(k + 1));
    out[k] = rate;
  }
}

std::vector<double> plant_derivative(const PureFeedbackPlant& plant,
                                     std::span<const double> x, double u) {
  std::vector<double> out(plant.order, 0.0);
  plant_derivative_into(plant, x, u, out);
  return out;
}

std::vector<double> plant_derivative(const PureFeedbackPlant& plant,
                                     const PlantState& state, double u) {
  return plant_derivative(plant, std::span<const double>(state.x), u);
}

double SensorFaultModel::eta(double t) const {
  if (t <= tau_f) return 1.0;
  if (ramp_width > 0.0 && t < tau_f + ramp_width) {
    const double phase = (t - tau_f) / ramp_width;
    return 1.0 + (eta_target - 1.0) * 0.5 * (1.0 - std::cos(M_PI * phase));
  }
  return eta_target;
}

double SensorFaultModel::eta_dot_max() const {
  if (eta_target == 1.0) return 0.0;
  if (ramp_width <= 0.0) return std::numeric_limits<double>::infinity();
  return std::abs(eta_target - 1.0) * M_PI / (2.0 * ramp_width);
}

double apply_sensor_fault(double x, double t, const SensorFaultModel& fault) {
  if (t <= fault.tau_f) return x;
  const double eta = fault.eta(t);
  if (!(eta > 0.0 && eta <= 1.0))
    raise(ErrorCode::fault_factor_out_of_range,
          "fault factor " + std::to_string(eta) + " outside (0, 1]");
  return eta * x;
}

SectorReport check_sector_bounds(const PureFeedbackPlant& plant,
                                 std::size_t level, const SectorBounds& b,
                                 const OperatingBox& box, std::size_t samples,
                                 std::uint64_t seed) {
  if (level < 1 || level > plant.order)
    raise(ErrorCode::invalid_argument, "sector check: level out of range");
  if (box.lo.size() != level + 1 || box.hi.size() != level + 1)
    raise(ErrorCode::invalid_argument,
          "sector check: box must have level+1 coordinate ranges");
  for (std::size_t i = 0; i <= level; ++i)
    if (!(box.lo[i] <= box.hi[i]))
      raise(ErrorCode::invalid_argument, "sector check: box lo > hi");
  if (samples < 10000)
    raise(ErrorCode::invalid_argument, "sector check: samples must be >= 10000");
  if (!(b.ell_lower > 0.0 && b.ell_upper > 0.0 && b.ell_lower_prime > 0.0 &&
        b.ell_upper_prime > 0.0))
    raise(ErrorCode::invalid_argument, "sector check: slopes must be positive");
  if (b.ell_lower > b.ell_upper || b.ell_lower_prime > b.ell_upper_prime)
    raise(ErrorCode::invalid_argument,
          "sector check: lower slope exceeds upper slope");

  std::mt19937_64 rng(seed);
  const auto& f = plant.f[level - 1];
  const double vlo = box.lo[level];
  const double vhi = box.hi[level];

  std::vector<double> xs(level);
  double worst = -std::numeric_limits<double>::infinity();

  auto probe = [&](double v) {
    for (std::size_t i = 0; i < level; ++i)
      xs[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * unit_real(rng);
    const double h = f(xs, v) - f(xs, 0.0);
    double lower_gap, upper_gap;
    if (v >= 0.0) {
      lower_gap = (b.ell_lower * v + b.phi_k1) - h;
      upper_gap = h - (b.ell_upper * v + b.phi_k2);
    } else {
      lower_gap = (b.ell_lower_prime * v + b.phi_k1_prime) - h;
      upper_gap = h - (b.ell_upper_prime * v + b.phi_k2_prime);
    }
    worst = std::max(worst, std::max(lower_gap, upper_gap));
  };

  // Deterministic v sweep first so box edges (where polynomial envelopes are
  // tight) are always hit, then the random bulk.
  const std::size_t sweep = 512;
  for (std::size_t i = 0; i < sweep; ++i)
    probe(vlo + (vhi - vlo) * static_cast<double>(i) /
                    static_cast<double>(sweep - 1));
  if (vlo <= 0.0 && 0.0 <= vhi) probe(0.0);
  for (std::size_t i = sweep; i < samples; ++i)
    probe(vlo + (vhi - vlo) * unit_real(rng));

  SectorReport report;
  report.worst_violation = worst;
  report.holds = worst <= 1e-9;
  return report;
}

}  // namespace etcsim
