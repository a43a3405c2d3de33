#include "etcsim/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "etcsim/error.hpp"

namespace etcsim {

namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kConnectivityTol = 1e-9;

// Cyclic Jacobi sweeps on a dense symmetric copy; eigenvalues only.
std::vector<double> symmetric_eigenvalues_ascending(std::vector<double> a,
                                                    std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {a[0]};
  auto at = [&a, n](std::size_t i, std::size_t j) -> double& {
    return a[i * n + j];
  };

  double fro2 = 0.0;
  for (double v : a) fro2 += v * v;
  const double stop = 1e-30 * std::max(fro2, 1.0);

  for (int sweep = 0; sweep < 64; ++sweep) {
    double off2 = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off2 += at(p, q) * at(p, q);
    if (off2 <= stop) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t r = 0; r < n; ++r) {
          const double arp = at(r, p);
          const double arq = at(r, q);
          at(r, p) = c * arp - s * arq;
          at(r, q) = s * arp + c * arq;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const double apr = at(p, r);
          const double aqr = at(q, r);
          at(p, r) = c * apr - s * aqr;
          at(q, r) = s * apr + c * aqr;
        }
      }
    }
  }

  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = at(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

}  // namespace

GraphTopology build_graph(const std::vector<double>& adjacency, std::size_t n) {
  if (n == 0 || adjacency.size() != n * n)
    raise(ErrorCode::invalid_argument,
          "adjacency must be a nonempty n x n matrix");

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double w = adjacency[i * n + j];
      if (!std::isfinite(w))
        raise(ErrorCode::invalid_argument, "adjacency entries must be finite");
      if (w < 0.0)
        raise(ErrorCode::negative_weight,
              "adjacency[" + std::to_string(i) + "][" + std::to_string(j) +
                  "] is negative");
      if (i == j && w != 0.0)
        raise(ErrorCode::nonzero_diagonal,
              "adjacency diagonal must be zero (no self-loops), row " +
                  std::to_string(i));
      if (j > i &&
          std::abs(w - adjacency[j * n + i]) > kSymmetryTol)
        raise(ErrorCode::non_symmetric,
              "adjacency[" + std::to_string(i) + "][" + std::to_string(j) +
                  "] != adjacency[" + std::to_string(j) + "][" +
                  std::to_string(i) + "] (graph must be undirected)");
    }
  }

  GraphTopology g;
  g.n_agents = n;
  g.adjacency = adjacency;
  g.degrees.resize(n);
  g.laplacian.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double d = 0.0;
    for (std::size_t j = 0; j < n; ++j) d += adjacency[i * n + j];
    g.degrees[i] = d;
    for (std::size_t j = 0; j < n; ++j)
      g.laplacian[i * n + j] = (i == j) ? d : -adjacency[i * n + j];
  }
  return g;
}

GraphTopology build_graph(const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.size();
  std::vector<double> flat;
  flat.reserve(n * n);
  for (const auto& row : rows) {
    if (row.size() != n)
      raise(ErrorCode::invalid_argument, "adjacency must be square");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return build_graph(flat, n);
}

std::vector<double> laplacian_spectrum(const GraphTopology& g) {
  return symmetric_eigenvalues_ascending(g.laplacian, g.n_agents);
}

bool is_connected(const GraphTopology& g) {
  if (g.n_agents <= 1) return true;
  const auto eig = laplacian_spectrum(g);
  return eig[1] > kConnectivityTol;
}

bool is_connected_traversal(const GraphTopology& g) {
  const std::size_t n = g.n_agents;
  if (n <= 1) return true;
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> queue{0};
  seen[0] = 1;
  std::size_t visited = 1;
  while (!queue.empty()) {
    const std::size_t i = queue.back();
    queue.pop_back();
    for (std::size_t j = 0; j < n; ++j) {
      if (!seen[j] && g.weight(i, j) > 0.0) {
        seen[j] = 1;
        ++visited;
        queue.push_back(j);
      }
    }
  }
  return visited == n;
}

std::vector<double> consensus_error(const GraphTopology& g,
                                    std::span<const double> values) {
  if (values.size() != g.n_agents)
    raise(ErrorCode::dimension_mismatch,
          "consensus_error: expected " + std::to_string(g.n_agents) +
              " values, got " + std::to_string(values.size()));
  std::vector<double> e(g.n_agents, 0.0);
  for (std::size_t i = 0; i < g.n_agents; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < g.n_agents; ++j)
      acc += g.weight(i, j) * (values[i] - values[j]);
    e[i] = acc;
  }
  return e;
}

double consensus_error_row(std::span<const double> row, double self_value,
                           std::span<const double> neighbor_values) {
  if (row.size() != neighbor_values.size())
    raise(ErrorCode::dimension_mismatch,
          "consensus_error_row: row/neighbor size mismatch");
  double acc = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j)
    acc += row[j] * (self_value - neighbor_values[j]);
  return acc;
}

double neighbor_mean(std::span<const double> row,
                     std::span<const double> neighbor_values) {
  if (row.size() != neighbor_values.size())
    raise(ErrorCode::dimension_mismatch,
          "neighbor_mean: row/neighbor size mismatch");
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (row[j] > 0.0) {
      sum += neighbor_values[j];
      ++count;
    }
  }
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

}  // namespace etcsim
