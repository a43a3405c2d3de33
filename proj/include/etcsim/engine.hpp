#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "etcsim/config.hpp"
#include "etcsim/controller.hpp"
#include "etcsim/graph.hpp"
#include "etcsim/trigger.hpp"

namespace etcsim {

// All trajectory arrays share the recorded time grid length.
struct AgentTrajectory {
  std::vector<std::vector<double>> x;        // [level][step] true states
  std::vector<std::vector<double>> x_f;      // polluted (sensor) outputs
  std::vector<std::vector<double>> x_held;   // self-channel held values
  std::vector<double> u;                     // actuated input (held)
  std::vector<double> v;                     // commanded input
  std::vector<double> e;                     // consensus error of x_f outputs
  std::vector<std::vector<double>> weight_norm;  // [level][step]
  // Controller chain diagnostics, recorded for the Lemma 3 harness.
  std::vector<std::vector<double>> z_chain;      // [level][step]
  std::vector<std::vector<double>> alpha_chain;  // [level][step]
  std::vector<std::vector<double>> nn_cont;      // NN value at continuous inputs
};

struct ChannelReport {
  ChannelLabel label;
  double threshold = 0.0;
  std::size_t count = 0;
  double min_gap = 0.0;
  double mean_gap = 0.0;
  double rate_bound = 0.0;   // observed max |d signal / dt|
  double certificate = 0.0;  // threshold / rate_bound when rate_bound > 0
  double hold_slack = 0.0;   // dt * rate_bound: max hold error beyond the
                             // threshold between two evaluations
  bool rate_defined = false;
  bool gap_below_certificate = false;
};

struct Metrics {
  double early_end = 0.0;    // early window is [0, early_end]
  double tail_start = 0.0;   // tail window is [tail_start, t_end]
  double early_max_e = 0.0;
  double tail_max_e = 0.0;
  double max_abs_x = 0.0;
  double max_abs_u = 0.0;
  double max_weight_norm = 0.0;
  std::size_t events_self = 0;
  std::size_t events_neighbor = 0;
  std::size_t events_input = 0;
  double min_gap = 0.0;  // +inf when no channel saw two events
};

struct SectorCheckResult {
  std::size_t level = 0;
  SectorReport report;
  bool box_covers_run = false;
};

struct SimResult {
  std::vector<double> time;
  std::vector<AgentTrajectory> agents;
  std::vector<TriggerChannel> channels;  // empty in nominal mode
  std::vector<ChannelReport> channel_reports;
  Metrics metrics;
  double eta_dot_fd_max = 0.0;  // largest finite-difference |eta_dot| observed
  bool hold_semantics_ok = true;
  std::vector<SectorCheckResult> sector_checks;
};

// One closed loop (nominal or event-triggered) stepped on a fixed grid.
// Twin mode is handled by run_twin, which owns two of these.
class Simulation {
 public:
  explicit Simulation(const ScenarioConfig& config);

  // One transition t -> t+dt: sensor outputs, trigger evaluation, cascade,
  // input hold, then plant RK4 / filter / weight advance.
  void step();

  SimResult run_recorded();

  double time() const;
  std::size_t steps_done() const { return steps_done_; }
  std::span<const double> state(std::size_t agent) const;
  double actuated_input(std::size_t agent) const;
  const GraphTopology& topology() const { return graph_; }

 private:
  struct StepEval {
    std::vector<std::vector<double>> x_f;
    std::vector<std::vector<double>> x_held;
    std::vector<double> v;
    std::vector<double> u;
    std::vector<double> e_cont;
    std::vector<CascadeEval> cascade;
    std::vector<std::vector<double>> nn_cont;
  };

  StepEval evaluate();
  void advance(const StepEval& eval);

  struct AgentRuntime {
    std::vector<double> x;
    ControllerState ctrl;
    double u_held = 0.0;
  };

  ScenarioConfig cfg_;
  bool event_mode_;
  GraphTopology graph_;
  PureFeedbackPlant plant_;
  std::vector<AgentRuntime> agents_;
  std::vector<std::vector<TriggerChannel>> self_ch_;   // [agent][level]
  std::vector<std::vector<TriggerChannel>> bcast_ch_;  // [agent][level]
  std::vector<TriggerChannel> input_ch_;               // [agent]
  std::size_t steps_done_ = 0;
};

// Per-level NN layouts implied by a scenario (level 1 reads one input, level
// k reads k self states plus the neighbor mean).
std::vector<RbfLayout> level_layouts(const ScenarioConfig& cfg);

SimResult run(const ScenarioConfig& config);

struct TwinResult {
  SimResult event_triggered;
  SimResult nominal;
  double sup_gap_x = 0.0;
  double sup_gap_u = 0.0;
};

TwinResult run_twin(const ScenarioConfig& config);

struct ThresholdRow {
  TriggerThresholds set;
  std::size_t events_self = 0;
  std::size_t events_neighbor = 0;
  std::size_t events_input = 0;
  double tail_max_e = 0.0;
  std::vector<std::size_t> channel_counts;  // per channel, construction order
};

std::vector<ThresholdRow> compare_thresholds(
    const ScenarioConfig& config, std::span<const TriggerThresholds> sets);

// Nominal z/alpha chains replayed over a recorded event-triggered run: same
// plant trajectory, same weight trajectory (via the recorded NN values at
// continuous inputs), only the signal chain recomputed from continuous
// signals.
struct ShadowChains {
  std::vector<std::vector<std::vector<double>>> z;      // [agent][level][step]
  std::vector<std::vector<std::vector<double>>> alpha;  // [agent][level][step]
};

ShadowChains shadow_nominal(const SimResult& result, const ScenarioConfig& config);

struct Lemma3Report {
  std::size_t violations = 0;         // z/alpha, against slack-inflated thresholds
  std::size_t violations_strict = 0;  // z/alpha, against the raw chain constants
  std::size_t filter_violations = 0;  // |alpha_kf - held alpha_kf| vs dfilter, with slack
  std::size_t filter_violations_strict = 0;
  double max_ratio = 0.0;             // worst |deviation| / strict bound
  std::vector<Lemma3Bounds> bounds;   // strict constants per agent
};

Lemma3Report check_lemma3(const SimResult& result, const ScenarioConfig& config);

// Umbrella for the CLI / C API: dispatches on config.mode and attaches the
// Lemma 3 report for event-triggered runs.
struct RunOutput {
  ScenarioConfig config;
  SimResult primary;
  std::optional<SimResult> nominal_twin;
  double twin_gap_x = 0.0;
  double twin_gap_u = 0.0;
  std::optional<Lemma3Report> lemma3;
};

RunOutput execute(const ScenarioConfig& config);

}  // namespace etcsim
