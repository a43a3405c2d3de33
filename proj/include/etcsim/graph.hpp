#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace etcsim {

// Undirected weighted communication topology with Laplacian data.
// Immutable after build_graph; every operation below is read-only.
struct GraphTopology {
  std::size_t n_agents = 0;
  std::vector<double> adjacency;  // row-major n x n
  std::vector<double> degrees;    // d_i = sum_j a_ij
  std::vector<double> laplacian;  // L = D - A, row-major

  double weight(std::size_t i, std::size_t j) const {
    return adjacency[i * n_agents + j];
  }
  std::span<const double> row(std::size_t i) const {
    return {adjacency.data() + i * n_agents, n_agents};
  }
};

// Requires a square matrix with nonnegative weights, zero diagonal and
// symmetry within 1e-12 absolute.
GraphTopology build_graph(const std::vector<double>& adjacency, std::size_t n);
GraphTopology build_graph(const std::vector<std::vector<double>>& rows);

// Laplacian eigenvalues in ascending order (cyclic Jacobi rotations; the
// matrices here are tiny, so sweeps are cheap).
std::vector<double> laplacian_spectrum(const GraphTopology& g);

// Spectral test: second-smallest Laplacian eigenvalue > 1e-9. A single-vertex
// graph counts as connected.
bool is_connected(const GraphTopology& g);

// Breadth-first search over positive-weight edges; agrees with the spectral
// test (asserted by the property suites).
bool is_connected_traversal(const GraphTopology& g);

// e = L * values.
std::vector<double> consensus_error(const GraphTopology& g,
                                    std::span<const double> values);

// Row-restricted form: sum_j row[j] * (self_value - neighbor_values[j]).
// The zero diagonal makes the self entry of neighbor_values irrelevant.
double consensus_error_row(std::span<const double> row, double self_value,
                           std::span<const double> neighbor_values);

// Plain mean of neighbor_values[j] over j with row[j] > 0; 0 for an isolated
// vertex.
double neighbor_mean(std::span<const double> row,
                     std::span<const double> neighbor_values);

}  // namespace etcsim
