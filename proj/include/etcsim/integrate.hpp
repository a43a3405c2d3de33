#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace etcsim {

// Classic fixed-step RK4. `deriv(state, out)` writes the state rate; any
// exogenous input the callable captures is held constant across substeps.
template <typename Deriv>
void rk4_step(Deriv&& deriv, std::vector<double>& x, double dt) {
  const std::size_t n = x.size();
  std::vector<double> k1(n), k2(n), k3(n), k4(n), probe(n);
  deriv(std::span<const double>(x), std::span<double>(k1));
  for (std::size_t i = 0; i < n; ++i) probe[i] = x[i] + 0.5 * dt * k1[i];
  deriv(std::span<const double>(probe), std::span<double>(k2));
  for (std::size_t i = 0; i < n; ++i) probe[i] = x[i] + 0.5 * dt * k2[i];
  deriv(std::span<const double>(probe), std::span<double>(k3));
  for (std::size_t i = 0; i < n; ++i) probe[i] = x[i] + dt * k3[i];
  deriv(std::span<const double>(probe), std::span<double>(k4));
  for (std::size_t i = 0; i < n; ++i)
    x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

}  // namespace etcsim
