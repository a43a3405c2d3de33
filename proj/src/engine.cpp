#include "etcsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "etcsim/error.hpp"
#include "etcsim/integrate.hpp"

namespace etcsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double max_abs_step_rate(std::span<const double> series, double dt) {
  double rate = 0.0;
  for (std::size_t m = 0; m + 1 < series.size(); ++m)
    rate = std::max(rate, std::abs(series[m + 1] - series[m]) / dt);
  return rate;
}

}  // namespace

std::vector<RbfLayout> level_layouts(const ScenarioConfig& cfg) {
  const std::size_t order = cfg.order();
  std::vector<RbfLayout> layouts;
  layouts.reserve(order);
  for (std::size_t level = 1; level <= order; ++level)
    layouts.push_back(make_grid_layout(nn_input_dim(level), cfg.rbf.node_count,
                                       cfg.rbf.width, cfg.rbf.box_lo,
                                       cfg.rbf.box_hi));
  return layouts;
}

Simulation::Simulation(const ScenarioConfig& config) : cfg_(config) {
  if (cfg_.mode == SimMode::twin)
    raise(ErrorCode::validation_error,
          "Simulation steps a single loop; use run_twin for twin mode");
  validate_config(cfg_);
  event_mode_ = cfg_.mode == SimMode::event_triggered;

  graph_ = build_graph(cfg_.adjacency);
  plant_ = find_plant(cfg_.plant_name);
  const std::size_t n_agents = cfg_.n_agents();
  const std::size_t order = plant_.order;

  const auto layouts = level_layouts(cfg_);
  agents_.resize(n_agents);
  for (std::size_t i = 0; i < n_agents; ++i) {
    AgentRuntime& a = agents_[i];
    a.x = cfg_.initial_states[i];
    a.ctrl.networks.reserve(order);
    for (std::size_t level = 1; level <= order; ++level)
      a.ctrl.networks.push_back(make_network(layouts[level - 1], cfg_.rbf.weight_bound));
    a.ctrl.filter_outputs.assign(order - 1, 0.0);
    a.ctrl.last_virtuals.assign(order, 0.0);
  }

  if (event_mode_) {
    self_ch_.resize(n_agents);
    bcast_ch_.resize(n_agents);
    input_ch_.resize(n_agents);
    for (std::size_t i = 0; i < n_agents; ++i) {
      self_ch_[i].resize(order);
      bcast_ch_[i].resize(order);
      for (std::size_t k = 0; k < order; ++k) {
        self_ch_[i][k].threshold = cfg_.thresholds.dx_self;
        self_ch_[i][k].label = {i + 1, ChannelKind::self_state, k + 1};
        bcast_ch_[i][k].threshold = cfg_.thresholds.dx_neighbor;
        bcast_ch_[i][k].label = {i + 1, ChannelKind::neighbor_state, k + 1};
      }
      input_ch_[i].threshold = cfg_.thresholds.du;
      input_ch_[i].label = {i + 1, ChannelKind::input, 0};
    }
  }
}

double Simulation::time() const { return static_cast<double>(steps_done_) * cfg_.dt; }

std::span<const double> Simulation::state(std::size_t agent) const {
  return agents_[agent].x;
}

double Simulation::actuated_input(std::size_t agent) const {
  return agents_[agent].u_held;
}

Simulation::StepEval Simulation::evaluate() {
  const std::size_t n_agents = agents_.size();
  const std::size_t order = plant_.order;
  const double t = time();
  const FeedbackMode fb_mode =
      event_mode_ ? FeedbackMode::event_triggered : FeedbackMode::nominal;

  StepEval ev;
  ev.x_f.resize(n_agents);
  ev.x_held.resize(n_agents);
  ev.v.resize(n_agents);
  ev.u.resize(n_agents);
  ev.e_cont.resize(n_agents);
  ev.cascade.resize(n_agents);
  ev.nn_cont.resize(n_agents);

  // (1) sensor outputs
  for (std::size_t i = 0; i < n_agents; ++i) {
    ev.x_f[i].resize(order);
    for (std::size_t k = 0; k < order; ++k)
      ev.x_f[i][k] = apply_sensor_fault(agents_[i].x[k], t, cfg_.faults[i]);
  }

  // (2) state and broadcast channels; all held values settle before any
  // cascade reads them
  if (event_mode_) {
    for (std::size_t i = 0; i < n_agents; ++i) {
      ev.x_held[i].resize(order);
      for (std::size_t k = 0; k < order; ++k) {
        ev.x_held[i][k] = check_and_update(self_ch_[i][k], ev.x_f[i][k], t).first;
        check_and_update(bcast_ch_[i][k], ev.x_f[i][k], t);
      }
    }
  } else {
    for (std::size_t i = 0; i < n_agents; ++i) ev.x_held[i] = ev.x_f[i];
  }

  std::vector<double> nb_first(n_agents);
  std::vector<double> xf_first(n_agents);
  for (std::size_t j = 0; j < n_agents; ++j) {
    xf_first[j] = ev.x_f[j][0];
    nb_first[j] = event_mode_ ? bcast_ch_[j][0].held_value : ev.x_f[j][0];
  }

  // (3) controller cascades on held values; (4) input channel hold
  for (std::size_t i = 0; i < n_agents; ++i) {
    const auto row = graph_.row(i);
    ev.cascade[i] = cascade_evaluate(fb_mode, ev.x_held[i], row, nb_first,
                                     agents_[i].ctrl, cfg_.gains);
    ev.v[i] = ev.cascade[i].v;
    ev.u[i] = event_mode_ ? check_and_update(input_ch_[i], ev.v[i], t).first
                          : ev.v[i];
    agents_[i].u_held = ev.u[i];

    ev.e_cont[i] = consensus_error_row(row, ev.x_f[i][0], xf_first);
    const double nb_mean_cont = neighbor_mean(row, xf_first);
    ev.nn_cont[i].resize(order);
    for (std::size_t level = 1; level <= order; ++level)
      ev.nn_cont[i][level - 1] =
          eval_network(agents_[i].ctrl.networks[level - 1],
                       nn_input(ev.x_f[i], level, nb_mean_cont));
  }

  return ev;
}

void Simulation::advance(const StepEval& ev) {
  const double dt = cfg_.dt;
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    cascade_advance(agents_[i].ctrl, ev.cascade[i], cfg_.gains, dt);
    const double u = ev.u[i];
    rk4_step(
        [&](std::span<const double> x, std::span<double> out) {
          plant_derivative_into(plant_, x, u, out);
        },
        agents_[i].x, dt);
  }
  ++steps_done_;

  const double t = time();
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    for (double x : agents_[i].x) {
      if (!std::isfinite(x))
        raise(ErrorCode::non_finite,
              "agent " + std::to_string(i + 1) + " state non-finite at t=" +
                  std::to_string(t));
      if (std::abs(x) > cfg_.divergence_limit)
        raise(ErrorCode::diverged,
              "agent " + std::to_string(i + 1) + " diverged (|x|=" +
                  std::to_string(std::abs(x)) + " > " +
                  std::to_string(cfg_.divergence_limit) + ") at t=" +
                  std::to_string(t));
    }
  }
}

void Simulation::step() { advance(evaluate()); }

SimResult Simulation::run_recorded() {
  const std::size_t n_agents = agents_.size();
  const std::size_t order = plant_.order;
  const double dt = cfg_.dt;
  const auto total_steps =
      static_cast<std::size_t>(std::max<long long>(1, std::llround(cfg_.t_end / dt)));
  const std::size_t rows = total_steps + 1;

  SimResult result;
  result.time.reserve(rows);
  result.agents.resize(n_agents);
  for (auto& traj : result.agents) {
    traj.x.assign(order, {});
    traj.x_f.assign(order, {});
    traj.x_held.assign(order, {});
    traj.weight_norm.assign(order, {});
    traj.z_chain.assign(order, {});
    traj.alpha_chain.assign(order, {});
    traj.nn_cont.assign(order, {});
    for (std::size_t k = 0; k < order; ++k) {
      traj.x[k].reserve(rows);
      traj.x_f[k].reserve(rows);
      traj.x_held[k].reserve(rows);
      traj.weight_norm[k].reserve(rows);
      traj.z_chain[k].reserve(rows);
      traj.alpha_chain[k].reserve(rows);
      traj.nn_cont[k].reserve(rows);
    }
    traj.u.reserve(rows);
    traj.v.reserve(rows);
    traj.e.reserve(rows);
  }

  for (std::size_t m = 0; m <= total_steps; ++m) {
    const StepEval ev = evaluate();
    result.time.push_back(time());
    for (std::size_t i = 0; i < n_agents; ++i) {
      AgentTrajectory& traj = result.agents[i];
      for (std::size_t k = 0; k < order; ++k) {
        traj.x[k].push_back(agents_[i].x[k]);
        traj.x_f[k].push_back(ev.x_f[i][k]);
        traj.x_held[k].push_back(ev.x_held[i][k]);
        double norm = 0.0;
        for (double w : agents_[i].ctrl.networks[k].weights) norm += w * w;
        traj.weight_norm[k].push_back(std::sqrt(norm));
        traj.z_chain[k].push_back(ev.cascade[i].z[k]);
        traj.alpha_chain[k].push_back(ev.cascade[i].alpha[k]);
        traj.nn_cont[k].push_back(ev.nn_cont[i][k]);
      }
      traj.u.push_back(ev.u[i]);
      traj.v.push_back(ev.v[i]);
      traj.e.push_back(ev.e_cont[i]);
    }
    if (m < total_steps) advance(ev);
  }

  // event channels and their statistics
  if (event_mode_) {
    const double t_begin = result.time.front();
    const double t_final = result.time.back();
    auto report_channel = [&](const TriggerChannel& ch,
                              std::span<const double> signal) {
      ChannelReport rep;
      rep.label = ch.label;
      rep.threshold = ch.threshold;
      const auto stats = inter_event_stats(ch, t_begin, t_final);
      rep.count = stats.count;
      rep.min_gap = stats.min_gap;
      rep.mean_gap = stats.mean_gap;
      rep.rate_bound = max_abs_step_rate(signal, dt);
      rep.rate_defined = rep.rate_bound > 0.0;
      rep.certificate = rep.rate_defined ? zeno_certificate(ch, rep.rate_bound) : 0.0;
      rep.hold_slack = dt * rep.rate_bound;
      rep.gap_below_certificate =
          rep.rate_defined && stats.count >= 2 &&
          rep.min_gap < rep.certificate - 1e-12 * std::max(1.0, rep.certificate);
      result.channel_reports.push_back(rep);
      result.channels.push_back(ch);
    };
    for (std::size_t i = 0; i < n_agents; ++i)
      for (std::size_t k = 0; k < order; ++k)
        report_channel(self_ch_[i][k], result.agents[i].x_f[k]);
    for (std::size_t i = 0; i < n_agents; ++i)
      for (std::size_t k = 0; k < order; ++k)
        report_channel(bcast_ch_[i][k], result.agents[i].x_f[k]);
    for (std::size_t i = 0; i < n_agents; ++i)
      report_channel(input_ch_[i], result.agents[i].v);
  }

  // metrics
  Metrics& met = result.metrics;
  met.early_end = std::min(1.0, cfg_.t_end);
  met.tail_start = 0.75 * cfg_.t_end;
  met.min_gap = kInf;
  for (std::size_t m = 0; m < result.time.size(); ++m) {
    const double t = result.time[m];
    for (std::size_t i = 0; i < n_agents; ++i) {
      const AgentTrajectory& traj = result.agents[i];
      const double abs_e = std::abs(traj.e[m]);
      if (t <= met.early_end) met.early_max_e = std::max(met.early_max_e, abs_e);
      if (t >= met.tail_start) met.tail_max_e = std::max(met.tail_max_e, abs_e);
      met.max_abs_u = std::max(met.max_abs_u, std::abs(traj.u[m]));
      for (std::size_t k = 0; k < order; ++k) {
        met.max_abs_x = std::max(met.max_abs_x, std::abs(traj.x[k][m]));
        met.max_weight_norm = std::max(met.max_weight_norm, traj.weight_norm[k][m]);
      }
    }
  }
  for (const auto& rep : result.channel_reports) {
    switch (rep.label.kind) {
      case ChannelKind::self_state: met.events_self += rep.count; break;
      case ChannelKind::neighbor_state: met.events_neighbor += rep.count; break;
      case ChannelKind::input: met.events_input += rep.count; break;
    }
    met.min_gap = std::min(met.min_gap, rep.min_gap);
  }

  // actuated input must be piecewise constant between input-channel events
  if (event_mode_) {
    for (std::size_t i = 0; i < n_agents && result.hold_semantics_ok; ++i) {
      const auto& times = input_ch_[i].event_times;
      const auto& u = result.agents[i].u;
      for (std::size_t m = 1; m < u.size(); ++m) {
        if (u[m] != u[m - 1] &&
            !std::binary_search(times.begin(), times.end(), result.time[m])) {
          result.hold_semantics_ok = false;
          break;
        }
      }
    }
  }

  // fault-factor slope check: finite differences along the recorded grid
  for (std::size_t i = 0; i < n_agents; ++i) {
    for (std::size_t m = 0; m + 1 < result.time.size(); ++m) {
      const double d = std::abs(cfg_.faults[i].eta(result.time[m + 1]) -
                                cfg_.faults[i].eta(result.time[m])) / dt;
      result.eta_dot_fd_max = std::max(result.eta_dot_fd_max, d);
    }
  }

  // advisory sector-bound verification over the configured boxes
  if (cfg_.sector_check) {
    for (const auto& lv : cfg_.sector_check->levels) {
      SectorCheckResult out;
      out.level = lv.level;
      out.report = check_sector_bounds(plant_, lv.level, lv.bounds, lv.box,
                                       cfg_.sector_check->samples,
                                       cfg_.sector_check->seed);
      out.box_covers_run = true;
      for (std::size_t d = 0; d < lv.level; ++d) {
        for (std::size_t i = 0; i < n_agents; ++i)
          for (double x : result.agents[i].x[d])
            if (x < lv.box.lo[d] || x > lv.box.hi[d]) out.box_covers_run = false;
      }
      for (std::size_t i = 0; i < n_agents; ++i) {
        const auto& v_series = lv.level == order ? result.agents[i].u
                                                 : result.agents[i].x[lv.level];
        for (double v : v_series)
          if (v < lv.box.lo[lv.level] || v > lv.box.hi[lv.level])
            out.box_covers_run = false;
      }
      result.sector_checks.push_back(std::move(out));
    }
  }

  return result;
}

SimResult run(const ScenarioConfig& config) {
  if (config.mode == SimMode::twin)
    raise(ErrorCode::validation_error, "run: use run_twin for twin mode");
  Simulation sim(config);
  return sim.run_recorded();
}

TwinResult run_twin(const ScenarioConfig& config) {
  ScenarioConfig ev_cfg = config;
  ev_cfg.mode = SimMode::event_triggered;
  ScenarioConfig nom_cfg = config;
  nom_cfg.mode = SimMode::nominal;

  TwinResult twin;
  twin.event_triggered = run(ev_cfg);
  twin.nominal = run(nom_cfg);

  const std::size_t rows = twin.event_triggered.time.size();
  for (std::size_t i = 0; i < twin.event_triggered.agents.size(); ++i) {
    const auto& a = twin.event_triggered.agents[i];
    const auto& b = twin.nominal.agents[i];
    for (std::size_t m = 0; m < rows; ++m) {
      for (std::size_t k = 0; k < a.x.size(); ++k)
        twin.sup_gap_x = std::max(twin.sup_gap_x, std::abs(a.x[k][m] - b.x[k][m]));
      twin.sup_gap_u = std::max(twin.sup_gap_u, std::abs(a.u[m] - b.u[m]));
    }
  }
  return twin;
}

std::vector<ThresholdRow> compare_thresholds(
    const ScenarioConfig& config, std::span<const TriggerThresholds> sets) {
  if (sets.size() < 2)
    raise(ErrorCode::invalid_argument,
          "compare_thresholds: need at least two threshold sets");
  std::vector<ThresholdRow> rows;
  rows.reserve(sets.size());
  for (const auto& set : sets) {
    ScenarioConfig cfg = config;
    cfg.mode = SimMode::event_triggered;
    cfg.thresholds = set;
    const SimResult r = run(cfg);
    ThresholdRow row;
    row.set = set;
    row.events_self = r.metrics.events_self;
    row.events_neighbor = r.metrics.events_neighbor;
    row.events_input = r.metrics.events_input;
    row.tail_max_e = r.metrics.tail_max_e;
    for (const auto& rep : r.channel_reports) row.channel_counts.push_back(rep.count);
    rows.push_back(row);
  }
  return rows;
}

ShadowChains shadow_nominal(const SimResult& result, const ScenarioConfig& config) {
  ShadowChains chains;
  const std::size_t n_agents = result.agents.size();
  chains.z.resize(n_agents);
  chains.alpha.resize(n_agents);
  if (result.time.empty() || n_agents == 0) return chains;

  const GraphTopology graph = build_graph(config.adjacency);
  const std::size_t order = result.agents[0].x.size();
  const std::size_t rows = result.time.size();
  const double dt = rows >= 2 ? result.time[1] - result.time[0] : config.dt;

  std::vector<double> xf_first(n_agents);
  for (std::size_t i = 0; i < n_agents; ++i) {
    chains.z[i].assign(order, std::vector<double>(rows, 0.0));
    chains.alpha[i].assign(order, std::vector<double>(rows, 0.0));
  }

  std::vector<std::vector<double>> filters(n_agents,
                                           std::vector<double>(order - 1, 0.0));
  for (std::size_t m = 0; m < rows; ++m) {
    for (std::size_t j = 0; j < n_agents; ++j) xf_first[j] = result.agents[j].x_f[0][m];
    for (std::size_t i = 0; i < n_agents; ++i) {
      const auto row = graph.row(i);
      const double e = consensus_error_row(row, xf_first[i], xf_first);
      const double z1 = result.agents[i].x_f[0][m];
      double alpha_prev =
          virtual_control_1(e, z1, result.agents[i].nn_cont[0][m], config.gains);
      chains.z[i][0][m] = z1;
      chains.alpha[i][0][m] = alpha_prev;
      double z_prev = z1;
      for (std::size_t level = 2; level <= order; ++level) {
        double& alpha_f = filters[i][level - 2];
        if (m == 0) alpha_f = alpha_prev;  // filter initialization rule
        const double z_k = result.agents[i].x_f[level - 1][m] - alpha_f;
        const double alpha_k =
            virtual_control_k(z_k, z_prev, result.agents[i].nn_cont[level - 1][m],
                              config.gains, level);
        chains.z[i][level - 1][m] = z_k;
        chains.alpha[i][level - 1][m] = alpha_k;
        z_prev = z_k;
        alpha_prev = alpha_k;
      }
      if (m + 1 < rows) {
        for (std::size_t level = 2; level <= order; ++level)
          filters[i][level - 2] =
              filter_step(filters[i][level - 2], chains.alpha[i][level - 2][m],
                          config.gains.xi[level - 2], dt);
      }
    }
  }
  return chains;
}

Lemma3Report check_lemma3(const SimResult& result, const ScenarioConfig& config) {
  Lemma3Report report;
  if (result.time.empty()) return report;

  const ShadowChains chains = shadow_nominal(result, config);
  const GraphTopology graph = build_graph(config.adjacency);
  const std::size_t n_agents = result.agents.size();
  const std::size_t order = result.agents[0].x.size();
  const std::size_t rows = result.time.size();
  const double dt = rows >= 2 ? result.time[1] - result.time[0] : config.dt;
  const auto layouts = level_layouts(config);

  auto per_level_ds = [&](const std::vector<double>& dx, double dxj) {
    std::vector<double> ds(order);
    for (std::size_t level = 1; level <= order; ++level) {
      std::vector<double> delta_beta(dx.begin(), dx.begin() + level);
      if (level >= 2) delta_beta.push_back(dxj);
      ds[level - 1] = basis_shift_bound(layouts[level - 1], delta_beta);
    }
    return ds;
  };

  const std::vector<double> weight_bounds(order, config.rbf.weight_bound);
  const std::vector<double> zero_gap(order - 1, 0.0);

  for (std::size_t i = 0; i < n_agents; ++i) {
    // strict chain constants
    std::vector<double> dx(order, config.thresholds.dx_self);
    const double dxj = config.thresholds.dx_neighbor;
    const auto ds = per_level_ds(dx, dxj);
    const Lemma3Bounds strict =
        lemma3_bounds(config.gains, dx, dxj, ds, graph.degrees[i], weight_bounds,
                      zero_gap);

    // slack-inflated constants: thresholds grown by one step's signal change
    std::vector<double> dx_eff(order);
    for (std::size_t k = 0; k < order; ++k)
      dx_eff[k] = config.thresholds.dx_self +
                  dt * max_abs_step_rate(result.agents[i].x_f[k], dt);
    double nb_rate = 0.0;
    for (std::size_t j = 0; j < n_agents; ++j)
      if (graph.weight(i, j) > 0.0)
        nb_rate = std::max(nb_rate, max_abs_step_rate(result.agents[j].x_f[0], dt));
    const double dxj_eff = config.thresholds.dx_neighbor + dt * nb_rate;
    const auto ds_eff = per_level_ds(dx_eff, dxj_eff);
    const Lemma3Bounds eff =
        lemma3_bounds(config.gains, dx_eff, dxj_eff, ds_eff, graph.degrees[i],
                      weight_bounds, zero_gap);

    for (std::size_t k = 0; k < order; ++k) {
      for (std::size_t m = 0; m < rows; ++m) {
        const double dev_z =
            std::abs(chains.z[i][k][m] - result.agents[i].z_chain[k][m]);
        const double dev_a =
            std::abs(chains.alpha[i][k][m] - result.agents[i].alpha_chain[k][m]);
        if (dev_z > strict.dz[k] || dev_a > strict.dalpha[k]) ++report.violations_strict;
        if (dev_z > eff.dz[k] || dev_a > eff.dalpha[k]) ++report.violations;
        report.max_ratio = std::max(report.max_ratio, dev_z / strict.dz[k]);
        report.max_ratio = std::max(report.max_ratio, dev_a / strict.dalpha[k]);

        // filter deviation: alpha_kf is recoverable as x_k - z_k on each chain
        if (k >= 1) {
          const double filt_shadow =
              result.agents[i].x_f[k][m] - chains.z[i][k][m];
          const double filt_held =
              result.agents[i].x_held[k][m] - result.agents[i].z_chain[k][m];
          const double dev_f = std::abs(filt_shadow - filt_held);
          if (dev_f > strict.dfilter[k - 1]) ++report.filter_violations_strict;
          if (dev_f > eff.dfilter[k - 1]) ++report.filter_violations;
        }
      }
    }
    report.bounds.push_back(strict);
  }
  return report;
}

RunOutput execute(const ScenarioConfig& config) {
  RunOutput out;
  out.config = config;
  switch (config.mode) {
    case SimMode::nominal:
      out.primary = run(config);
      break;
    case SimMode::event_triggered:
      out.primary = run(config);
      out.lemma3 = check_lemma3(out.primary, config);
      break;
    case SimMode::twin: {
      TwinResult twin = run_twin(config);
      out.twin_gap_x = twin.sup_gap_x;
      out.twin_gap_u = twin.sup_gap_u;
      out.lemma3 = check_lemma3(twin.event_triggered, config);
      out.primary = std::move(twin.event_triggered);
      out.nominal_twin = std::move(twin.nominal);
      break;
    }
  }
  return out;
}

}  // namespace etcsim
