// Acceptance suite: runs every closed-loop and lemma-level criterion at its
// pinned tolerance and prints one PASS/FAIL line per criterion. Exit status
// is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "etcsim/engine.hpp"
#include "etcsim/integrate.hpp"
#include "etcsim/rbf.hpp"
#include "etcsim/report.hpp"

using namespace etcsim;

namespace {

int g_failures = 0;

void report(int number, const char* name, bool pass, const std::string& detail) {
  std::printf("%s  criterion %2d (%s): %s\n", pass ? "PASS" : "FAIL", number, name,
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(double v) { return format_double(v); }

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

int main() {
  const ScenarioConfig golden = builtin_config("paper_sec5");

  // Golden event-triggered run shared by criteria 1, 2, 7, 8, 9.
  const auto wall_start = std::chrono::steady_clock::now();
  const SimResult g = run(golden);
  const double golden_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start)
          .count();

  // 1. boundedness of states, inputs and weights on the golden scenario
  {
    const bool pass = g.metrics.max_abs_x < 10.0 && g.metrics.max_abs_u < 100.0 &&
                      g.metrics.max_weight_norm <= golden.rbf.weight_bound &&
                      golden_seconds < 10.0;
    report(1, "golden boundedness", pass,
           "max|x|=" + fmt(g.metrics.max_abs_x) + " (<10), max|u|=" +
               fmt(g.metrics.max_abs_u) + " (<100), max||Phi||=" +
               fmt(g.metrics.max_weight_norm) + " (<=" +
               fmt(golden.rbf.weight_bound) + "), runtime=" + fmt(golden_seconds) +
               "s (<10s)");
  }

  // 2. consensus residual in the tail window, and its decrease vs the start
  {
    const double tail = g.metrics.tail_max_e;
    const double early = g.metrics.early_max_e;
    const bool pass = tail <= 0.1 && 5.0 * tail <= early;
    report(2, "consensus residual", pass,
           "tail max|e| (t in [15,20]) = " + fmt(tail) +
               " (<=0.1), early max|e| (t in [0,1]) = " + fmt(early) +
               ", decrease factor " + fmt(early / std::max(tail, 1e-300)) +
               " (>=5)");
  }

  // 3. threshold monotonicity: wider thresholds mean fewer events, per kind
  //    and per individual channel
  {
    const std::vector<TriggerThresholds> sets{{0.001, 0.001, 0.01},
                                              {0.002, 0.005, 0.05}};
    const auto rows = compare_thresholds(golden, sets);
    const bool counts_drop = rows[1].events_self < rows[0].events_self &&
                             rows[1].events_neighbor < rows[0].events_neighbor &&
                             rows[1].events_input < rows[0].events_input;
    std::size_t per_channel_increases = 0;
    for (std::size_t c = 0; c < rows[0].channel_counts.size(); ++c)
      if (rows[1].channel_counts[c] > rows[0].channel_counts[c])
        ++per_channel_increases;
    const bool residual_ok = rows[1].tail_max_e >= rows[0].tail_max_e - 0.02;
    report(3, "threshold monotonicity",
           counts_drop && residual_ok && per_channel_increases == 0,
           "events A=(" + std::to_string(rows[0].events_self) + "," +
               std::to_string(rows[0].events_neighbor) + "," +
               std::to_string(rows[0].events_input) + ") vs B=(" +
               std::to_string(rows[1].events_self) + "," +
               std::to_string(rows[1].events_neighbor) + "," +
               std::to_string(rows[1].events_input) + "); per-channel increases " +
               std::to_string(per_channel_increases) + "; tail residual A=" +
               fmt(rows[0].tail_max_e) + " B=" + fmt(rows[1].tail_max_e));
  }

  // 4. degeneracy: vanishing thresholds reproduce the nominal loop
  {
    ScenarioConfig cfg = golden;
    cfg.t_end = 5.0;
    cfg.mode = SimMode::twin;
    cfg.thresholds = {1e-12, 1e-12, 1e-12};
    const TwinResult twin = run_twin(cfg);
    const bool pass = twin.sup_gap_x <= 1e-9 && twin.sup_gap_u <= 1e-9;
    report(4, "degeneracy oracle", pass,
           "thresholds 1e-12 over 5 s: sup|x_event - x_nominal| = " +
               fmt(twin.sup_gap_x) + ", sup|u_event - u_nominal| = " +
               fmt(twin.sup_gap_u) + " (<=1e-9)");
  }

  // 5. Laplacian spectrum facts
  {
    const auto ring = build_graph(std::vector<std::vector<double>>{
        {0, 1, 0, 1}, {1, 0, 1, 0}, {0, 1, 0, 1}, {1, 0, 1, 0}});
    const auto eig = laplacian_spectrum(ring);
    const double expected[4] = {0.0, 2.0, 2.0, 4.0};
    double worst = 0.0;
    for (int i = 0; i < 4; ++i) worst = std::max(worst, std::abs(eig[i] - expected[i]));

    const auto split = build_graph(std::vector<std::vector<double>>{
        {0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}});
    const auto eig2 = laplacian_spectrum(split);
    const bool pass = worst <= 1e-9 && eig2[1] < 1e-9 && !is_connected(split);
    report(5, "laplacian spectrum", pass,
           "ring spectrum gap " + fmt(worst) + " (<=1e-9); disconnected lambda_2 = " +
               fmt(eig2[1]) + " (<1e-9), is_connected=false");
  }

  // 6. basis-shift bound: randomized pairs at the golden NN settings
  {
    const auto layout = make_grid_layout(1, 25, 2.0, -2.0, 2.0);
    const double bound = basis_shift_bound(layout, std::vector<double>{1e-3});
    std::mt19937_64 rng(160920240ull);
    std::size_t violations = 0;
    for (int trial = 0; trial < 10000; ++trial) {
      const double beta =
          -2.5 + 5.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
      const double shift =
          -1e-3 + 2e-3 * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
      const auto a = eval_basis(layout, std::vector<double>{beta});
      const auto b = eval_basis(layout, std::vector<double>{beta + shift});
      double gap2 = 0.0;
      for (std::size_t k = 0; k < a.size(); ++k) gap2 += (a[k] - b[k]) * (a[k] - b[k]);
      if (std::sqrt(gap2) > bound) ++violations;
    }
    const bool pass =
        violations == 0 && std::abs(bound - 2.1444097124017669e-3) <= 1e-9;
    report(6, "basis shift bound", pass,
           "Ds = " + fmt(bound) + " (approx 2.144e-3), violations " +
               std::to_string(violations) + "/10000");
  }

  // 7. signal-chain bounds along the golden run
  {
    const Lemma3Report rep = check_lemma3(g, golden);
    const bool pass = rep.violations == 0 && rep.filter_violations == 0;
    report(7, "signal chain bounds", pass,
           std::to_string(rep.violations) + " z/alpha violations with one-step "
               "slack (" + std::to_string(rep.violations_strict) +
               " against the raw constants), " +
               std::to_string(rep.filter_violations) +
               " filter violations, max dev/bound " + fmt(rep.max_ratio));
  }

  // 8. Zeno surrogate: finite counts, grid-limited gaps, positive certificates
  {
    bool pass = !g.channel_reports.empty();
    std::size_t total = 0;
    double worst_gap = 1e300;
    for (const auto& rep : g.channel_reports) {
      total += rep.count;
      if (rep.count >= 2) worst_gap = std::min(worst_gap, rep.min_gap);
      if (rep.count < 1 || rep.count >= g.time.size() + 1) pass = false;
      if (rep.count >= 2 && rep.min_gap < golden.dt - 1e-12) pass = false;
      if (rep.rate_defined && !(rep.certificate > 0.0)) pass = false;
      if (rep.gap_below_certificate) pass = false;
    }
    report(8, "zeno surrogate", pass,
           std::to_string(total) + " events over " +
               std::to_string(g.channel_reports.size()) +
               " channels, min inter-event gap " + fmt(worst_gap) + " (>= dt = " +
               fmt(golden.dt) + "), certificates positive");
  }

  // 9. projection invariant: along the run and over random drives
  {
    bool run_ok = g.metrics.max_weight_norm <= golden.rbf.weight_bound;
    std::mt19937_64 rng(424242);
    auto net = make_network(make_grid_layout(1, 9, 2.0, -2.0, 2.0), 1.25);
    std::size_t violations = 0;
    for (int trial = 0; trial < 10000; ++trial) {
      const double beta = -3.0 + 6.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
      const double z = -50.0 + 100.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
      const auto basis = eval_basis(net.layout, std::vector<double>{beta});
      net = adapt_step(std::move(net), basis, z, 0.5, 0.05);
      double norm = 0.0;
      for (double w : net.weights) norm += w * w;
      if (std::sqrt(norm) > net.weight_bound) ++violations;
    }
    report(9, "projection invariant", run_ok && violations == 0,
           "golden run max||Phi|| = " + fmt(g.metrics.max_weight_norm) + " (<= " +
               fmt(golden.rbf.weight_bound) + "); random-drive violations " +
               std::to_string(violations) + "/10000");
  }

  // 10. integrator validation on xdot = -x
  {
    auto deriv = [](std::span<const double> x, std::span<double> out) {
      out[0] = -x[0];
    };
    std::vector<double> x{1.0};
    rk4_step(deriv, x, 1e-3);
    const double one_step_rel = std::abs(x[0] - std::exp(-1e-3)) / std::exp(-1e-3);
    x = {1.0};
    for (int m = 0; m < 1000; ++m) rk4_step(deriv, x, 1e-3);
    const double global_rel = std::abs(x[0] - std::exp(-1.0)) / std::exp(-1.0);
    const bool pass = one_step_rel <= 1e-13 && global_rel <= 1e-11;
    report(10, "integrator validation", pass,
           "one-step relative error " + fmt(one_step_rel) +
               " (<=1e-13), global over [0,1] " + fmt(global_rel) + " (<=1e-11)");
  }

  // 11. determinism: byte-identical trajectories.csv across two executions
  {
    namespace fs = std::filesystem;
    const auto base = fs::temp_directory_path() / "etcsim_acceptance";
    fs::remove_all(base);
    RunOutput out_a = execute(golden);
    RunOutput out_b = execute(golden);
    write_outputs(out_a, (base / "a").string());
    write_outputs(out_b, (base / "b").string());
    const std::string csv_a = read_file(base / "a" / "trajectories.csv");
    const std::string csv_b = read_file(base / "b" / "trajectories.csv");
    const bool pass = !csv_a.empty() && csv_a == csv_b;
    report(11, "determinism", pass,
           "two golden executions: trajectories.csv " +
               std::to_string(csv_a.size()) + " bytes, byte-identical=" +
               (pass ? "yes" : "no"));
    fs::remove_all(base);
  }

  std::printf("%d/11 criteria passed\n", 11 - g_failures);
  return g_failures;
}
