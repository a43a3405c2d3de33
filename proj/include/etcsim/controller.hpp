#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "etcsim/rbf.hpp"

namespace etcsim {

struct ControllerGains {
  double delta1 = 0.0;          // consensus gain
  std::vector<double> gamma;    // per level 1..n
  std::vector<double> xi;       // filter time constants, levels 2..n
  std::vector<double> lambda;   // adaptation gains per level 1..n

  void validate(std::size_t order) const;
};

// Per-agent controller memory: one network per level, one first-order filter
// per level >= 2. Filters are seeded from the first cascade evaluation
// (alpha_{kf}(0) = alpha_{k-1}(0)).
struct ControllerState {
  std::vector<RbfNetwork> networks;
  std::vector<double> filter_outputs;  // size order-1
  std::vector<double> last_virtuals;   // size order
  bool initialized = false;
};

// z1 = x_f[0]; z_k = x_f[k-1] - filter_outputs[k-2]. The same formula serves
// continuous and held inputs.
std::vector<double> surface_errors(std::span<const double> x_f,
                                   std::span<const double> filter_outputs);

double virtual_control_1(double e, double z1, double nn_value,
                         const ControllerGains& gains);
double virtual_control_1(double e, double z1, const RbfNetwork& net,
                         std::span<const double> beta1,
                         const ControllerGains& gains);

double virtual_control_k(double z_k, double z_km1, double nn_value,
                         const ControllerGains& gains, std::size_t level);
double virtual_control_k(double z_k, double z_km1, const RbfNetwork& net,
                         std::span<const double> beta_k,
                         const ControllerGains& gains, std::size_t level);

// One explicit substep of xi * alpha_f_dot + alpha_f = alpha_in.
double filter_step(double alpha_f, double alpha_in, double xi, double dt);

// NN input for one level: the first `level` (possibly held) self states, plus
// the neighbor first-state mean for level >= 2.
std::size_t nn_input_dim(std::size_t level);
std::vector<double> nn_input(std::span<const double> x_f, std::size_t level,
                             double neighbor_first_mean);

enum class FeedbackMode { nominal, event_triggered };

struct CascadeEval {
  double e = 0.0;                           // row-restricted consensus error
  std::vector<double> z;                    // surface errors per level
  std::vector<double> alpha;                // virtual controls per level
  std::vector<std::vector<double>> basis;   // S(beta) per level, reused by adaptation
  double v = 0.0;                           // commanded input (= alpha_n)
};

// The commanded input is the level-n virtual control.
double control_output(const CascadeEval& eval);
double control_output(const ControllerState& state);  // last evaluated cascade

// Evaluates the full chain at one instant: consensus error, surface errors,
// virtual controls, commanded input. Seeds the filters on the first call.
// Both modes share the formulas; the mode only documents which signals the
// caller fed (continuous vs held).
CascadeEval cascade_evaluate(FeedbackMode mode, std::span<const double> x_f,
                             std::span<const double> graph_row,
                             std::span<const double> neighbor_first,
                             ControllerState& state,
                             const ControllerGains& gains);

// Advances filters (explicit substep) and weights (adapt_step on the same
// (S, z) pairs the control law used).
void cascade_advance(ControllerState& state, const CascadeEval& eval,
                     const ControllerGains& gains, double dt);

std::pair<double, ControllerState> controller_cascade(
    FeedbackMode mode, std::span<const double> x_f,
    std::span<const double> graph_row, std::span<const double> neighbor_first,
    ControllerState state, const ControllerGains& gains, double dt);

// Chain constants bounding the gap between continuous and held signal chains:
//   de      = degree * (delta_x[0] + delta_xj)
//   dz_1    = delta_x[0]
//   dalpha_1 = delta1*de + (gamma_1+1)*dz_1 + wb_1*ds_1
//   dfilter_k = filter_init_gap[k-2] + dalpha_{k-1}
//   dz_k    = delta_x[k-1] + dfilter_k
//   dalpha_k = (gamma_k+1)*dz_k + dz_{k-1} + wb_k*ds_k
struct Lemma3Bounds {
  double de = 0.0;
  std::vector<double> dz;
  std::vector<double> dalpha;
  std::vector<double> dfilter;  // per level 2..n
};

Lemma3Bounds lemma3_bounds(const ControllerGains& gains,
                           std::span<const double> delta_x, double delta_xj,
                           std::span<const double> ds, double degree,
                           std::span<const double> weight_bounds,
                           std::span<const double> filter_init_gap);

}  // namespace etcsim
