#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "etcsim/controller.hpp"
#include "etcsim/plant.hpp"

namespace etcsim {

enum class SimMode { nominal, event_triggered, twin };
const char* sim_mode_name(SimMode mode);
SimMode parse_sim_mode(const std::string& text);  // accepts "event" shorthand

struct RbfSettings {
  std::size_t node_count = 25;
  double width = 2.0;
  double box_lo = -2.0;
  double box_hi = 2.0;
  double weight_bound = 10.0;
};

struct TriggerThresholds {
  double dx_self = 1e-3;
  double dx_neighbor = 1e-3;
  double du = 1e-2;
};

struct SectorCheckLevel {
  std::size_t level = 1;
  OperatingBox box;
  SectorBounds bounds;
};

struct SectorCheckConfig {
  std::size_t samples = 20000;
  std::uint64_t seed = 1;
  std::vector<SectorCheckLevel> levels;
};

// Fully resolved experiment description. parse_config applies defaults and
// validates; the resolved echo re-parses to the identical configuration.
struct ScenarioConfig {
  std::vector<std::vector<double>> adjacency;
  std::string plant_name = "paper_sec5";
  std::vector<std::vector<double>> initial_states;  // [agent][level]
  std::vector<SensorFaultModel> faults;             // one per agent
  ControllerGains gains;
  RbfSettings rbf;
  TriggerThresholds thresholds;
  double dt = 1e-3;
  double t_end = 20.0;
  SimMode mode = SimMode::event_triggered;
  double divergence_limit = 1e3;
  std::optional<SectorCheckConfig> sector_check;

  std::size_t n_agents() const { return adjacency.size(); }
  std::size_t order() const;  // looked up from the plant registry
};

ScenarioConfig parse_config(const std::string& json_text);
ScenarioConfig load_config(const std::string& path);

// Bundled scenarios; "paper_sec5" is the golden four-agent ring experiment.
ScenarioConfig builtin_config(const std::string& name);
std::vector<std::string> builtin_config_names();

void validate_config(const ScenarioConfig& cfg);

// Canonical pretty-printed echo with every default filled in.
std::string resolved_config_json(const ScenarioConfig& cfg);

// FNV-1a 64-bit over the canonical (key-sorted) compact serialization, as a
// 16-digit hex string; stable under key reordering of the input document.
std::string config_hash(const ScenarioConfig& cfg);

}  // namespace etcsim
