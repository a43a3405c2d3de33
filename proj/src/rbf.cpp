#include "etcsim/rbf.hpp"

#include <cmath>
#include <string>

#include "etcsim/error.hpp"

namespace etcsim {

namespace {

double norm2(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

}  // namespace

RbfLayout make_grid_layout(std::size_t input_dim, std::size_t node_count,
                           double width, double box_lo, double box_hi) {
  if (input_dim < 1)
    raise(ErrorCode::invalid_argument, "rbf layout: input_dim must be >= 1");
  if (node_count < 1)
    raise(ErrorCode::invalid_argument, "rbf layout: node_count must be >= 1");
  if (!(width > 0.0))
    raise(ErrorCode::invalid_argument, "rbf layout: width must be positive");
  if (!(box_lo < box_hi))
    raise(ErrorCode::invalid_argument, "rbf layout: box_lo must be < box_hi");

  RbfLayout layout;
  layout.input_dim = input_dim;
  layout.node_count = node_count;
  layout.width = width;
  layout.centers.assign(node_count * input_dim, 0.5 * (box_lo + box_hi));

  auto axis_point = [&](std::size_t idx, std::size_t count) {
    if (count == 1) return 0.5 * (box_lo + box_hi);
    return box_lo + (box_hi - box_lo) * static_cast<double>(idx) /
                        static_cast<double>(count - 1);
  };

  if (input_dim == 1) {
    for (std::size_t b = 0; b < node_count; ++b)
      layout.centers[b] = axis_point(b, node_count);
    return layout;
  }

  const auto side =
      static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(node_count))));
  if (side * side != node_count)
    raise(ErrorCode::invalid_argument,
          "rbf layout: node_count must be a perfect square when input_dim >= 2 "
          "(got " + std::to_string(node_count) + ")");
  for (std::size_t b = 0; b < node_count; ++b) {
    layout.centers[b * input_dim + 0] = axis_point(b / side, side);
    layout.centers[b * input_dim + 1] = axis_point(b % side, side);
    // remaining coordinates stay at the midpoint
  }
  return layout;
}

std::vector<double> eval_basis(const RbfLayout& layout,
                               std::span<const double> beta) {
  if (beta.size() != layout.input_dim)
    raise(ErrorCode::dimension_mismatch,
          "eval_basis: expected input of dim " +
              std::to_string(layout.input_dim) + ", got " +
              std::to_string(beta.size()));
  std::vector<double> s(layout.node_count);
  const double inv_w2 = 1.0 / (layout.width * layout.width);
  for (std::size_t b = 0; b < layout.node_count; ++b) {
    const auto mu = layout.center(b);
    double dist2 = 0.0;
    for (std::size_t i = 0; i < layout.input_dim; ++i) {
      const double d = beta[i] - mu[i];
      dist2 += d * d;
    }
    s[b] = std::exp(-dist2 * inv_w2);
  }
  return s;
}

RbfNetwork make_network(RbfLayout layout, double weight_bound) {
  if (!(weight_bound > 0.0))
    raise(ErrorCode::invalid_argument, "rbf network: weight_bound must be positive");
  RbfNetwork net;
  net.weights.assign(layout.node_count, 0.0);
  net.layout = std::move(layout);
  net.weight_bound = weight_bound;
  return net;
}

double eval_network(const RbfNetwork& net, std::span<const double> beta) {
  if (net.weights.size() != net.layout.node_count)
    raise(ErrorCode::dimension_mismatch, "eval_network: weight size mismatch");
  const auto s = eval_basis(net.layout, beta);
  double acc = 0.0;
  for (std::size_t b = 0; b < s.size(); ++b) acc += net.weights[b] * s[b];
  return acc;
}

std::vector<double> project_weights(std::vector<double> weights, double bound) {
  if (!(bound > 0.0))
    raise(ErrorCode::invalid_argument, "project_weights: bound must be positive");
  double n = norm2(weights);
  // A second pass absorbs the rare 1-ulp overshoot of the scaled norm, so the
  // ball invariant holds under plain <= comparison.
  for (int pass = 0; pass < 4 && n > bound; ++pass) {
    const double scale = bound / n;
    for (double& w : weights) w *= scale;
    n = norm2(weights);
  }
  return weights;
}

RbfNetwork adapt_step(RbfNetwork net, std::span<const double> basis, double z,
                      double gain, double dt) {
  if (!(gain > 0.0))
    raise(ErrorCode::non_positive_gain, "adapt_step: adaptation gain must be positive");
  if (!(dt > 0.0))
    raise(ErrorCode::invalid_argument, "adapt_step: dt must be positive");
  if (basis.size() != net.weights.size())
    raise(ErrorCode::dimension_mismatch, "adapt_step: basis size mismatch");
  const double drive = gain * z * dt;
  for (std::size_t b = 0; b < basis.size(); ++b) net.weights[b] += drive * basis[b];
  net.weights = project_weights(std::move(net.weights), net.weight_bound);
  return net;
}

double basis_shift_bound(const RbfLayout& layout,
                         std::span<const double> delta_beta) {
  if (delta_beta.size() != layout.input_dim)
    raise(ErrorCode::dimension_mismatch, "basis_shift_bound: delta size mismatch");
  double d2 = 0.0;
  for (double d : delta_beta) {
    if (d < 0.0)
      raise(ErrorCode::invalid_argument,
            "basis_shift_bound: deviations must be nonnegative");
    d2 += d * d;
  }
  const double lipschitz = std::sqrt(2.0 / M_E) / layout.width;
  return std::sqrt(static_cast<double>(layout.node_count)) * lipschitz *
         std::sqrt(d2);
}

}  // namespace etcsim
