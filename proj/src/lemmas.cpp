#include "etcsim/lemmas.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "etcsim/engine.hpp"
#include "etcsim/graph.hpp"
#include "etcsim/rbf.hpp"
#include "etcsim/report.hpp"

namespace etcsim {

namespace {

inline double unit_real(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * unit_real(rng);
}

struct SuiteLog {
  std::ostringstream os;
  bool all_pass = true;

  void check(const std::string& name, bool pass, const std::string& detail) {
    os << (pass ? "PASS" : "FAIL") << ' ' << name << ": " << detail << '\n';
    all_pass = all_pass && pass;
  }
};

double norm2(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

void lemma1_suite(SuiteLog& log, std::uint64_t seed) {
  {
    const auto ring = build_graph(std::vector<std::vector<double>>{
        {0, 1, 0, 1}, {1, 0, 1, 0}, {0, 1, 0, 1}, {1, 0, 1, 0}});
    const auto eig = laplacian_spectrum(ring);
    const double expected[4] = {0.0, 2.0, 2.0, 4.0};
    double worst = 0.0;
    for (int i = 0; i < 4; ++i) worst = std::max(worst, std::abs(eig[i] - expected[i]));
    log.check("lemma1.ring_spectrum", worst <= 1e-9,
              "unit ring-4 spectrum vs {0,2,2,4}, worst gap " + format_double(worst));
  }
  {
    const auto split = build_graph(std::vector<std::vector<double>>{
        {0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}});
    const auto eig = laplacian_spectrum(split);
    const bool pass = eig[1] < 1e-9 && !is_connected(split) &&
                      !is_connected_traversal(split);
    log.check("lemma1.disconnected", pass,
              "two disjoint edges: lambda_2 = " + format_double(eig[1]));
  }
  {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::size_t disagreements = 0;
    double min_eig = 0.0;
    double worst_row_sum = 0.0;
    const int trials = 1000;
    for (int trial = 0; trial < trials; ++trial) {
      const std::size_t n = 2 + static_cast<std::size_t>(rng() % 7);
      std::vector<double> a(n * n, 0.0);
      // dyadic weights keep Laplacian row sums exactly zero in floating point
      const double weights[4] = {0.25, 0.5, 1.0, 2.0};
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (rng() & 1) a[i * n + j] = a[j * n + i] = weights[rng() % 4];
      const auto g = build_graph(a, n);
      if (is_connected(g) != is_connected_traversal(g)) ++disagreements;
      const auto eig = laplacian_spectrum(g);
      min_eig = std::min(min_eig, eig.front());
      for (std::size_t i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) row_sum += g.laplacian[i * n + j];
        worst_row_sum = std::max(worst_row_sum, std::abs(row_sum));
      }
    }
    log.check("lemma1.random_graphs",
              disagreements == 0 && min_eig >= -1e-9 && worst_row_sum == 0.0,
              "1000 random graphs: spectral/BFS disagreements " +
                  std::to_string(disagreements) + ", min eigenvalue " +
                  format_double(min_eig) + ", max |L*1| " +
                  format_double(worst_row_sum));
  }
}

void lemma2_suite(SuiteLog& log, std::uint64_t seed) {
  const auto layout = make_grid_layout(1, 25, 2.0, -2.0, 2.0);
  const double deviation = 1e-3;
  const double bound = basis_shift_bound(layout, std::vector<double>{deviation});
  {
    std::mt19937_64 rng(seed ^ 0xc2b2ae3d27d4eb4full);
    std::size_t violations = 0;
    double worst_margin = 0.0;
    for (int trial = 0; trial < 10000; ++trial) {
      const double beta = uniform(rng, -2.5, 2.5);
      const double shifted = beta + uniform(rng, -deviation, deviation);
      const auto s_a = eval_basis(layout, std::vector<double>{beta});
      const auto s_b = eval_basis(layout, std::vector<double>{shifted});
      double gap2 = 0.0;
      for (std::size_t b = 0; b < s_a.size(); ++b)
        gap2 += (s_a[b] - s_b[b]) * (s_a[b] - s_b[b]);
      const double gap = std::sqrt(gap2);
      if (gap > bound) ++violations;
      worst_margin = std::max(worst_margin, gap / bound);
    }
    log.check("lemma2.shift_bound", violations == 0,
              "10^4 pairs at p=25, width=2, deviation 1e-3: bound " +
                  format_double(bound) + ", violations " +
                  std::to_string(violations) + ", tightest usage " +
                  format_double(worst_margin));
  }
  {
    // central finite differences validate the Lipschitz constant the bound
    // relies on
    const auto layout2 = make_grid_layout(2, 25, 2.0, -2.0, 2.0);
    std::mt19937_64 rng(seed ^ 0x165667b19e3779f9ull);
    const double h = 1e-5;
    const double lipschitz = std::sqrt(2.0 / M_E) / layout2.width;
    double worst_rel = 0.0;
    double worst_node_grad = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> beta{uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0)};
      double err2 = 0.0, ref2 = 0.0;
      for (std::size_t b = 0; b < layout2.node_count; ++b) {
        const auto mu = layout2.center(b);
        double node_grad2 = 0.0;
        for (std::size_t d = 0; d < 2; ++d) {
          auto plus = beta, minus = beta;
          plus[d] += h;
          minus[d] -= h;
          const double fd =
              (eval_basis(layout2, plus)[b] - eval_basis(layout2, minus)[b]) /
              (2.0 * h);
          double dist2 = 0.0;
          for (std::size_t q = 0; q < 2; ++q)
            dist2 += (beta[q] - mu[q]) * (beta[q] - mu[q]);
          const double analytic = -2.0 * (beta[d] - mu[d]) /
                                  (layout2.width * layout2.width) *
                                  std::exp(-dist2 / (layout2.width * layout2.width));
          err2 += (fd - analytic) * (fd - analytic);
          ref2 += analytic * analytic;
          node_grad2 += fd * fd;
        }
        worst_node_grad = std::max(worst_node_grad, std::sqrt(node_grad2));
      }
      worst_rel = std::max(worst_rel, std::sqrt(err2 / std::max(ref2, 1e-18)));
    }
    log.check("lemma2.gradient", worst_rel <= 1e-6 && worst_node_grad <= lipschitz * (1.0 + 1e-6),
              "finite differences vs analytic gradient: worst relative error " +
                  format_double(worst_rel) + ", max node gradient " +
                  format_double(worst_node_grad) + " vs Lipschitz " +
                  format_double(lipschitz));
  }
}

void lemma3_suite(SuiteLog& log) {
  ScenarioConfig cfg = builtin_config("paper_sec5");
  cfg.t_end = 4.0;
  cfg.mode = SimMode::event_triggered;
  const SimResult result = run(cfg);
  const Lemma3Report report = check_lemma3(result, cfg);
  log.check("lemma3.golden_chain", report.violations == 0,
            "golden scenario, 4 s horizon: " + std::to_string(report.violations) +
                " violations with slack (" +
                std::to_string(report.violations_strict) +
                " strict), max dev/bound " + format_double(report.max_ratio));
}

void projection_suite(SuiteLog& log, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x27d4eb2f165667c5ull);
  auto random_vec = [&](std::size_t p, double scale) {
    std::vector<double> v(p);
    for (double& x : v) x = uniform(rng, -scale, scale);
    return v;
  };

  {
    std::size_t failures = 0;
    for (int trial = 0; trial < 10000; ++trial) {
      const std::size_t p = 1 + rng() % 8;
      const double bound = uniform(rng, 0.1, 5.0);
      const auto w = random_vec(p, 8.0);
      const auto once = project_weights(w, bound);
      const auto twice = project_weights(once, bound);
      if (once != twice || norm2(once) > bound) ++failures;
    }
    log.check("projection.idempotent", failures == 0,
              "10^4 random vectors, failures " + std::to_string(failures));
  }
  {
    std::size_t failures = 0;
    for (int trial = 0; trial < 10000; ++trial) {
      const std::size_t p = 1 + rng() % 8;
      const double bound = uniform(rng, 0.1, 5.0);
      const auto w1 = random_vec(p, 8.0);
      const auto w2 = random_vec(p, 8.0);
      const auto p1 = project_weights(w1, bound);
      const auto p2 = project_weights(w2, bound);
      double d_before = 0.0, d_after = 0.0;
      for (std::size_t i = 0; i < p; ++i) {
        d_before += (w1[i] - w2[i]) * (w1[i] - w2[i]);
        d_after += (p1[i] - p2[i]) * (p1[i] - p2[i]);
      }
      if (std::sqrt(d_after) > std::sqrt(d_before) * (1.0 + 1e-12)) ++failures;
    }
    log.check("projection.nonexpansive", failures == 0,
              "10^4 random pairs, failures " + std::to_string(failures));
  }
  {
    std::size_t failures = 0;
    const auto layout = make_grid_layout(1, 9, 2.0, -2.0, 2.0);
    auto net = make_network(layout, 1.5);
    for (int trial = 0; trial < 10000; ++trial) {
      const auto basis =
          eval_basis(layout, std::vector<double>{uniform(rng, -3.0, 3.0)});
      const double z = uniform(rng, -50.0, 50.0);
      net = adapt_step(std::move(net), basis, z, uniform(rng, 0.001, 2.0),
                       uniform(rng, 1e-4, 0.5));
      if (norm2(net.weights) > net.weight_bound) ++failures;
    }
    log.check("projection.adapt_bound", failures == 0,
              "10^4 random drives against the ball radius, failures " +
                  std::to_string(failures));
  }
}

}  // namespace

LemmaSuiteReport run_lemma_suites(std::uint64_t seed) {
  SuiteLog log;
  lemma1_suite(log, seed);
  lemma2_suite(log, seed);
  lemma3_suite(log);
  projection_suite(log, seed);

  LemmaSuiteReport report;
  report.all_pass = log.all_pass;
  report.text = log.os.str();
  return report;
}

}  // namespace etcsim
