#include "etcsim/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "etcsim/error.hpp"

namespace etcsim {

namespace {

struct EventRow {
  double t;
  std::size_t agent;
  ChannelKind kind;
  std::size_t level;
  double value;
};

int kind_order(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::self_state: return 0;
    case ChannelKind::neighbor_state: return 1;
    case ChannelKind::input: return 2;
  }
  return 3;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorCode::io_error, "cannot write '" + path.string() + "'");
  out << content;
  if (!out) raise(ErrorCode::io_error, "write failed for '" + path.string() + "'");
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_trajectories_csv(std::ostream& os, const SimResult& result) {
  const std::size_t order = result.agents.empty() ? 0 : result.agents[0].x.size();
  os << "t,agent";
  for (std::size_t k = 1; k <= order; ++k) os << ",x" << k;
  for (std::size_t k = 1; k <= order; ++k) os << ",xf" << k;
  os << ",u,v,e\n";
  for (std::size_t m = 0; m < result.time.size(); ++m) {
    for (std::size_t i = 0; i < result.agents.size(); ++i) {
      const AgentTrajectory& traj = result.agents[i];
      os << format_double(result.time[m]) << ',' << (i + 1);
      for (std::size_t k = 0; k < order; ++k) os << ',' << format_double(traj.x[k][m]);
      for (std::size_t k = 0; k < order; ++k)
        os << ',' << format_double(traj.x_f[k][m]);
      os << ',' << format_double(traj.u[m]) << ',' << format_double(traj.v[m])
         << ',' << format_double(traj.e[m]) << '\n';
    }
  }
}

void write_events_csv(std::ostream& os, const SimResult& result) {
  std::vector<EventRow> rows;
  for (const auto& ch : result.channels)
    for (std::size_t p = 0; p < ch.event_times.size(); ++p)
      rows.push_back({ch.event_times[p], ch.label.agent, ch.label.kind,
                      ch.label.level, ch.event_values[p]});
  std::stable_sort(rows.begin(), rows.end(), [](const EventRow& a, const EventRow& b) {
    if (a.t != b.t) return a.t < b.t;
    if (a.agent != b.agent) return a.agent < b.agent;
    if (kind_order(a.kind) != kind_order(b.kind))
      return kind_order(a.kind) < kind_order(b.kind);
    return a.level < b.level;
  });
  os << "t,agent,kind,level,value\n";
  for (const auto& row : rows)
    os << format_double(row.t) << ',' << row.agent << ','
       << channel_kind_name(row.kind) << ',' << row.level << ','
       << format_double(row.value) << '\n';
}

std::string summary_text(const RunOutput& output) {
  const SimResult& r = output.primary;
  const ScenarioConfig& cfg = output.config;
  std::ostringstream os;
  os << "etcsim run summary\n";
  os << "config_hash: " << config_hash(cfg) << "\n";
  os << "mode: " << sim_mode_name(cfg.mode) << "\n";
  os << "plant: " << cfg.plant_name << " (order " << cfg.order() << ")"
     << "  agents: " << cfg.n_agents() << "  dt: " << format_double(cfg.dt)
     << "  t_end: " << format_double(cfg.t_end) << "\n";
  os << "windows: early [0, " << format_double(r.metrics.early_end)
     << "], tail [" << format_double(r.metrics.tail_start) << ", "
     << format_double(cfg.t_end) << "]\n";

  os << "\n[metrics]\n";
  os << "early_max_e: " << format_double(r.metrics.early_max_e) << "\n";
  os << "tail_max_e: " << format_double(r.metrics.tail_max_e) << "\n";
  os << "max_abs_x: " << format_double(r.metrics.max_abs_x) << "\n";
  os << "max_abs_u: " << format_double(r.metrics.max_abs_u) << "\n";
  os << "max_weight_norm: " << format_double(r.metrics.max_weight_norm)
     << " (bound " << format_double(cfg.rbf.weight_bound) << ")\n";

  os << "\n[events]\n";
  if (r.channel_reports.empty()) {
    os << "none (continuous feedback)\n";
  } else {
    os << "counts: self_state=" << r.metrics.events_self
       << " neighbor_state=" << r.metrics.events_neighbor
       << " input=" << r.metrics.events_input
       << "  min_gap=" << format_double(r.metrics.min_gap) << "\n";
    os << "agent kind level threshold count min_gap mean_gap rate_bound "
          "zeno_certificate hold_slack flag\n";
    for (const auto& rep : r.channel_reports) {
      os << rep.label.agent << ' ' << channel_kind_name(rep.label.kind) << ' '
         << rep.label.level << ' ' << format_double(rep.threshold) << ' '
         << rep.count << ' ' << format_double(rep.min_gap) << ' '
         << format_double(rep.mean_gap) << ' ';
      if (rep.rate_defined)
        os << format_double(rep.rate_bound) << ' ' << format_double(rep.certificate)
           << ' ' << format_double(rep.hold_slack);
      else
        os << "- - -";
      os << (rep.gap_below_certificate ? " RATE_UNDERESTIMATED" : " ok") << "\n";
    }
  }

  os << "\n[checks]\n";
  os << "projection_bound: "
     << (r.metrics.max_weight_norm <= cfg.rbf.weight_bound ? "OK" : "VIOLATED")
     << " (max " << format_double(r.metrics.max_weight_norm) << " vs "
     << format_double(cfg.rbf.weight_bound) << ")\n";
  os << "hold_semantics: " << (r.hold_semantics_ok ? "OK" : "VIOLATED") << "\n";
  {
    double min_bound = std::numeric_limits<double>::infinity();
    for (const auto& f : cfg.faults) min_bound = std::min(min_bound, f.eta_dot_bound);
    os << "fault_rate_bound: "
       << (r.eta_dot_fd_max < min_bound ? "OK" : "VIOLATED") << " (max |d eta/dt| fd "
       << format_double(r.eta_dot_fd_max) << " vs bound "
       << format_double(min_bound) << ")\n";
  }
  for (const auto& sc : r.sector_checks) {
    os << "sector_level_" << sc.level << ": "
       << (sc.report.holds ? "holds" : "violated") << " (worst "
       << format_double(sc.report.worst_violation) << ", box_covers_run "
       << (sc.box_covers_run ? "yes" : "no") << ")\n";
  }
  if (output.lemma3) {
    const auto& l3 = *output.lemma3;
    os << "lemma3: "
       << (l3.violations == 0 && l3.filter_violations == 0 ? "OK" : "VIOLATED")
       << " (" << l3.violations << " chain violations with slack, "
       << l3.violations_strict << " strict; " << l3.filter_violations
       << " filter violations with slack, " << l3.filter_violations_strict
       << " strict; max dev/bound " << format_double(l3.max_ratio) << ")\n";
  }
  if (output.nominal_twin) {
    os << "twin_gap_x: " << format_double(output.twin_gap_x) << "\n";
    os << "twin_gap_u: " << format_double(output.twin_gap_u) << "\n";
  }
  return os.str();
}

std::string comparison_csv(const std::vector<ThresholdRow>& rows) {
  std::ostringstream os;
  os << "set,dx_self,dx_neighbor,du,events_self,events_neighbor,events_input,"
        "tail_max_e\n";
  for (std::size_t s = 0; s < rows.size(); ++s) {
    const ThresholdRow& row = rows[s];
    os << (s + 1) << ',' << format_double(row.set.dx_self) << ','
       << format_double(row.set.dx_neighbor) << ',' << format_double(row.set.du)
       << ',' << row.events_self << ',' << row.events_neighbor << ','
       << row.events_input << ',' << format_double(row.tail_max_e) << '\n';
  }
  return os.str();
}

void write_outputs(const RunOutput& output, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec && !fs::is_directory(out_dir))
    raise(ErrorCode::io_error, "cannot create output directory '" + out_dir + "'");

  {
    std::ostringstream os;
    write_trajectories_csv(os, output.primary);
    write_file(fs::path(out_dir) / "trajectories.csv", os.str());
  }
  {
    std::ostringstream os;
    write_events_csv(os, output.primary);
    write_file(fs::path(out_dir) / "events.csv", os.str());
  }
  if (output.nominal_twin) {
    std::ostringstream os;
    write_trajectories_csv(os, *output.nominal_twin);
    write_file(fs::path(out_dir) / "trajectories_nominal.csv", os.str());
  }
  write_file(fs::path(out_dir) / "summary.txt", summary_text(output));
  write_file(fs::path(out_dir) / "resolved_config.json",
             resolved_config_json(output.config));
}

TrajectoryTable read_trajectories_csv(std::istream& is) {
  TrajectoryTable table;
  std::string line;
  if (!std::getline(is, line))
    raise(ErrorCode::io_error, "trajectories.csv: missing header");
  {
    std::stringstream header(line);
    std::string name;
    while (std::getline(header, name, ',')) table.columns.push_back(name);
  }
  for (const auto& name : table.columns) table.data[name];
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    std::size_t col = 0;
    while (std::getline(row, cell, ',')) {
      if (col >= table.columns.size())
        raise(ErrorCode::io_error, "trajectories.csv: ragged row");
      table.data[table.columns[col]].push_back(std::strtod(cell.c_str(), nullptr));
      ++col;
    }
    if (col != table.columns.size())
      raise(ErrorCode::io_error, "trajectories.csv: ragged row");
  }
  return table;
}

std::map<std::string, double> metric_map(const RunOutput& output) {
  const Metrics& m = output.primary.metrics;
  std::map<std::string, double> out;
  out["early_max_e"] = m.early_max_e;
  out["tail_max_e"] = m.tail_max_e;
  out["max_abs_x"] = m.max_abs_x;
  out["max_abs_u"] = m.max_abs_u;
  out["max_weight_norm"] = m.max_weight_norm;
  out["events_self"] = static_cast<double>(m.events_self);
  out["events_neighbor"] = static_cast<double>(m.events_neighbor);
  out["events_input"] = static_cast<double>(m.events_input);
  out["min_gap"] = m.min_gap;
  out["eta_dot_fd_max"] = output.primary.eta_dot_fd_max;
  out["hold_semantics_ok"] = output.primary.hold_semantics_ok ? 1.0 : 0.0;
  out["steps"] = static_cast<double>(
      output.primary.time.empty() ? 0 : output.primary.time.size() - 1);
  if (output.lemma3) {
    out["lemma3_violations"] = static_cast<double>(output.lemma3->violations);
    out["lemma3_violations_strict"] =
        static_cast<double>(output.lemma3->violations_strict);
    out["lemma3_filter_violations"] =
        static_cast<double>(output.lemma3->filter_violations);
    out["lemma3_max_ratio"] = output.lemma3->max_ratio;
  }
  if (output.nominal_twin) {
    out["twin_gap_x"] = output.twin_gap_x;
    out["twin_gap_u"] = output.twin_gap_u;
  }
  return out;
}

}  // namespace etcsim
