#include "etcsim/controller.hpp"

#include <cmath>
#include <string>

#include "etcsim/error.hpp"
#include "etcsim/graph.hpp"

namespace etcsim {

void ControllerGains::validate(std::size_t order) const {
  if (!(delta1 > 0.0))
    raise(ErrorCode::validation_error, "gains.delta1: must be > 0");
  if (gamma.size() != order)
    raise(ErrorCode::validation_error,
          "gains.gamma: expected " + std::to_string(order) + " entries");
  if (lambda.size() != order)
    raise(ErrorCode::validation_error,
          "gains.lambda: expected " + std::to_string(order) + " entries");
  if (xi.size() + 1 != order)
    raise(ErrorCode::validation_error,
          "gains.xi: expected " + std::to_string(order - 1) + " entries");
  for (std::size_t k = 0; k < order; ++k) {
    if (!(gamma[k] > 0.0))
      raise(ErrorCode::validation_error,
            "gains.gamma[" + std::to_string(k) + "]: must be > 0");
    if (!(lambda[k] > 0.0))
      raise(ErrorCode::validation_error,
            "gains.lambda[" + std::to_string(k) + "]: must be > 0");
  }
  for (std::size_t k = 0; k + 1 < order; ++k)
    if (!(xi[k] > 0.0))
      raise(ErrorCode::validation_error,
            "gains.xi[" + std::to_string(k) + "]: must be > 0");
}

std::vector<double> surface_errors(std::span<const double> x_f,
                                   std::span<const double> filter_outputs) {
  if (x_f.empty() || filter_outputs.size() + 1 != x_f.size())
    raise(ErrorCode::invalid_argument,
          "surface_errors: need one filter output per level >= 2");
  std::vector<double> z(x_f.size());
  z[0] = x_f[0];
  for (std::size_t k = 1; k < x_f.size(); ++k)
    z[k] = x_f[k] - filter_outputs[k - 1];
  return z;
}

double virtual_control_1(double e, double z1, double nn_value,
                         const ControllerGains& gains) {
  return -gains.delta1 * e - (gains.gamma[0] + 1.0) * z1 - nn_value;
}

double virtual_control_1(double e, double z1, const RbfNetwork& net,
                         std::span<const double> beta1,
                         const ControllerGains& gains) {
  return virtual_control_1(e, z1, eval_network(net, beta1), gains);
}

double virtual_control_k(double z_k, double z_km1, double nn_value,
                         const ControllerGains& gains, std::size_t level) {
  if (level < 2 || level > gains.gamma.size())
    raise(ErrorCode::invalid_argument, "virtual_control_k: level out of range");
  return -(gains.gamma[level - 1] + 1.0) * z_k - z_km1 - nn_value;
}

double virtual_control_k(double z_k, double z_km1, const RbfNetwork& net,
                         std::span<const double> beta_k,
                         const ControllerGains& gains, std::size_t level) {
  return virtual_control_k(z_k, z_km1, eval_network(net, beta_k), gains, level);
}

double filter_step(double alpha_f, double alpha_in, double xi, double dt) {
  if (!(xi > 0.0) || !(dt > 0.0))
    raise(ErrorCode::invalid_argument, "filter_step: xi and dt must be positive");
  if (dt > xi)
    raise(ErrorCode::step_too_large,
          "filter_step: dt " + std::to_string(dt) + " exceeds filter constant " +
              std::to_string(xi));
  return alpha_f + dt * (alpha_in - alpha_f) / xi;
}

std::size_t nn_input_dim(std::size_t level) { return level == 1 ? 1 : level + 1; }

std::vector<double> nn_input(std::span<const double> x_f, std::size_t level,
                             double neighbor_first_mean) {
  if (level < 1 || level > x_f.size())
    raise(ErrorCode::invalid_argument, "nn_input: level out of range");
  std::vector<double> beta(x_f.begin(), x_f.begin() + level);
  if (level >= 2) beta.push_back(neighbor_first_mean);
  return beta;
}

double control_output(const CascadeEval& eval) { return eval.alpha.back(); }

double control_output(const ControllerState& state) {
  if (state.last_virtuals.empty())
    raise(ErrorCode::invalid_argument, "control_output: cascade not yet evaluated");
  return state.last_virtuals.back();
}

namespace {

CascadeEval cascade_evaluate_impl(std::span<const double> x_f,
                                  std::span<const double> graph_row,
                                  std::span<const double> neighbor_first,
                                  ControllerState& state,
                                  const ControllerGains& gains) {
  const std::size_t n = state.networks.size();
  if (n == 0 || x_f.size() != n)
    raise(ErrorCode::dimension_mismatch,
          "cascade: state vector does not match controller order");
  if (state.filter_outputs.size() + 1 != n)
    raise(ErrorCode::dimension_mismatch, "cascade: filter bank size mismatch");

  CascadeEval out;
  out.z.resize(n);
  out.alpha.resize(n);
  out.basis.resize(n);

  out.e = consensus_error_row(graph_row, x_f[0], neighbor_first);
  const double nb_mean = neighbor_mean(graph_row, neighbor_first);

  out.z[0] = x_f[0];
  {
    const auto beta = nn_input(x_f, 1, nb_mean);
    out.basis[0] = eval_basis(state.networks[0].layout, beta);
    double nn = 0.0;
    for (std::size_t b = 0; b < out.basis[0].size(); ++b)
      nn += state.networks[0].weights[b] * out.basis[0][b];
    out.alpha[0] = virtual_control_1(out.e, out.z[0], nn, gains);
  }

  for (std::size_t level = 2; level <= n; ++level) {
    double& alpha_f = state.filter_outputs[level - 2];
    if (!state.initialized) alpha_f = out.alpha[level - 2];
    out.z[level - 1] = x_f[level - 1] - alpha_f;
    const auto beta = nn_input(x_f, level, nb_mean);
    out.basis[level - 1] = eval_basis(state.networks[level - 1].layout, beta);
    double nn = 0.0;
    for (std::size_t b = 0; b < out.basis[level - 1].size(); ++b)
      nn += state.networks[level - 1].weights[b] * out.basis[level - 1][b];
    out.alpha[level - 1] =
        virtual_control_k(out.z[level - 1], out.z[level - 2], nn, gains, level);
  }

  state.initialized = true;
  state.last_virtuals = out.alpha;
  out.v = out.alpha[n - 1];

  for (double a : out.alpha)
    if (!std::isfinite(a))
      raise(ErrorCode::controller_diverged,
            "cascade produced a non-finite virtual control");
  return out;
}

}  // namespace

CascadeEval cascade_evaluate(FeedbackMode, std::span<const double> x_f,
                             std::span<const double> graph_row,
                             std::span<const double> neighbor_first,
                             ControllerState& state,
                             const ControllerGains& gains) {
  // Identical formulas in both modes; callers feed held samples in
  // event-triggered mode and continuous signals in nominal mode.
  return cascade_evaluate_impl(x_f, graph_row, neighbor_first, state, gains);
}

void cascade_advance(ControllerState& state, const CascadeEval& eval,
                     const ControllerGains& gains, double dt) {
  const std::size_t n = state.networks.size();
  for (std::size_t level = 2; level <= n; ++level)
    state.filter_outputs[level - 2] =
        filter_step(state.filter_outputs[level - 2], eval.alpha[level - 2],
                    gains.xi[level - 2], dt);
  for (std::size_t level = 1; level <= n; ++level)
    state.networks[level - 1] =
        adapt_step(std::move(state.networks[level - 1]), eval.basis[level - 1],
                   eval.z[level - 1], gains.lambda[level - 1], dt);
}

std::pair<double, ControllerState> controller_cascade(
    FeedbackMode mode, std::span<const double> x_f,
    std::span<const double> graph_row, std::span<const double> neighbor_first,
    ControllerState state, const ControllerGains& gains, double dt) {
  const CascadeEval eval =
      cascade_evaluate(mode, x_f, graph_row, neighbor_first, state, gains);
  cascade_advance(state, eval, gains, dt);
  return {eval.v, std::move(state)};
}

Lemma3Bounds lemma3_bounds(const ControllerGains& gains,
                           std::span<const double> delta_x, double delta_xj,
                           std::span<const double> ds, double degree,
                           std::span<const double> weight_bounds,
                           std::span<const double> filter_init_gap) {
  const std::size_t n = gains.gamma.size();
  if (delta_x.size() != n || ds.size() != n || weight_bounds.size() != n)
    raise(ErrorCode::invalid_argument, "lemma3_bounds: per-level input size mismatch");
  if (filter_init_gap.size() + 1 != n)
    raise(ErrorCode::invalid_argument,
          "lemma3_bounds: need one filter gap per level >= 2");
  auto nonneg = [](double v) { return v >= 0.0; };
  if (!nonneg(delta_xj) || !nonneg(degree))
    raise(ErrorCode::invalid_argument, "lemma3_bounds: inputs must be nonnegative");
  for (std::size_t k = 0; k < n; ++k)
    if (!nonneg(delta_x[k]) || !nonneg(ds[k]) || !nonneg(weight_bounds[k]))
      raise(ErrorCode::invalid_argument, "lemma3_bounds: inputs must be nonnegative");
  for (double g : filter_init_gap)
    if (!nonneg(g))
      raise(ErrorCode::invalid_argument, "lemma3_bounds: inputs must be nonnegative");

  Lemma3Bounds b;
  b.dz.resize(n);
  b.dalpha.resize(n);
  b.dfilter.resize(n - 1);

  b.de = degree * (delta_x[0] + delta_xj);
  b.dz[0] = delta_x[0];
  b.dalpha[0] = gains.delta1 * b.de + (gains.gamma[0] + 1.0) * b.dz[0] +
                weight_bounds[0] * ds[0];
  for (std::size_t level = 2; level <= n; ++level) {
    b.dfilter[level - 2] = filter_init_gap[level - 2] + b.dalpha[level - 2];
    b.dz[level - 1] = delta_x[level - 1] + b.dfilter[level - 2];
    b.dalpha[level - 1] = (gains.gamma[level - 1] + 1.0) * b.dz[level - 1] +
                          b.dz[level - 2] + weight_bounds[level - 1] * ds[level - 1];
  }
  return b;
}

}  // namespace etcsim
