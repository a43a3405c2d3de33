#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace etcsim {

// Gaussian basis layout: node_count centers in R^input_dim, one shared width.
struct RbfLayout {
  std::size_t input_dim = 0;
  std::size_t node_count = 0;
  std::vector<double> centers;  // row-major node_count x input_dim
  double width = 1.0;

  std::span<const double> center(std::size_t b) const {
    return {centers.data() + b * input_dim, input_dim};
  }
};

// Uniform grid over [box_lo, box_hi]. One input dimension places all nodes
// along the axis; with two or more dimensions the first two axes carry a
// square grid (node_count must be a perfect square) and the remaining
// coordinates sit at the box midpoint.
RbfLayout make_grid_layout(std::size_t input_dim, std::size_t node_count,
                           double width, double box_lo, double box_hi);

// S_b(beta) = exp(-||beta - mu_b||^2 / width^2); entries in (0, 1].
std::vector<double> eval_basis(const RbfLayout& layout,
                               std::span<const double> beta);

struct RbfNetwork {
  RbfLayout layout;
  std::vector<double> weights;  // starts at zero
  double weight_bound = 10.0;
};

RbfNetwork make_network(RbfLayout layout, double weight_bound);

double eval_network(const RbfNetwork& net, std::span<const double> beta);

// Radial retraction onto the closed ball of the given radius; identity for
// interior points.
std::vector<double> project_weights(std::vector<double> weights, double bound);

// One explicit step of Phi_dot = gain * S * z followed by the projection.
RbfNetwork adapt_step(RbfNetwork net, std::span<const double> basis, double z,
                      double gain, double dt);

// Certified shift constant: ||S(b) - S(b')||_2 <= result whenever
// |b - b'| <= delta_beta coordinate-wise. Each Gaussian's gradient norm peaks
// at sqrt(2/e)/width, so the bound is sqrt(p) * sqrt(2/e)/width * ||delta_beta||_2.
double basis_shift_bound(const RbfLayout& layout,
                         std::span<const double> delta_beta);

}  // namespace etcsim
