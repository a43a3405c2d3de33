#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "etcsim/engine.hpp"

namespace etcsim {

// %.17g — enough digits that re-parsing reproduces the exact double.
std::string format_double(double value);

void write_trajectories_csv(std::ostream& os, const SimResult& result);
void write_events_csv(std::ostream& os, const SimResult& result);
std::string summary_text(const RunOutput& output);
std::string comparison_csv(const std::vector<ThresholdRow>& rows);

// Writes trajectories.csv, events.csv, summary.txt and resolved_config.json
// into out_dir (created if missing); twin runs add trajectories_nominal.csv.
void write_outputs(const RunOutput& output, const std::string& out_dir);

// Column-major read-back of a trajectories.csv stream, keyed by header name.
struct TrajectoryTable {
  std::vector<std::string> columns;
  std::map<std::string, std::vector<double>> data;
};

TrajectoryTable read_trajectories_csv(std::istream& is);

// Flat name -> value view of a run, used by the C API metric accessor.
std::map<std::string, double> metric_map(const RunOutput& output);

}  // namespace etcsim
