#include "etcsim/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>
#include <string_view>

#include "json.hpp"

#include "etcsim/error.hpp"
#include "etcsim/graph.hpp"

namespace etcsim {

namespace {

using nlohmann::json;

[[noreturn]] void schema_fail(const std::string& path, const std::string& what) {
  raise(ErrorCode::schema_error, path + ": " + what);
}

[[noreturn]] void invalid(const std::string& path, const std::string& what) {
  raise(ErrorCode::validation_error, path + ": " + what);
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<std::string_view> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (auto k : allowed)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known) schema_fail(path + "." + it.key(), "unknown key");
  }
}

const json& require(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) schema_fail(path + "." + key, "missing required key");
  return *it;
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) schema_fail(path, "expected a number");
  return j.get<double>();
}

std::size_t as_count(const json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    schema_fail(path, "expected a nonnegative integer");
  return j.get<std::size_t>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) schema_fail(path, "expected a string");
  return j.get<std::string>();
}

std::vector<double> as_number_array(const json& j, const std::string& path) {
  if (!j.is_array()) schema_fail(path, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(as_number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<std::vector<double>> as_matrix(const json& j, const std::string& path) {
  if (!j.is_array()) schema_fail(path, "expected an array of arrays");
  std::vector<std::vector<double>> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(as_number_array(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

double number_or(const json& obj, const std::string& path, const char* key,
                 double fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  return as_number(*it, path + "." + key);
}

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

json resolved_json_value(const ScenarioConfig& cfg);

// Golden four-agent scenario; mirrors configs/paper_sec5.json.
constexpr const char* kPaperSec5Json = R"json({
  "graph": {
    "adjacency": [[0, 1, 0, 1], [1, 0, 1, 0], [0, 1, 0, 1], [1, 0, 1, 0]]
  },
  "plant": {
    "name": "paper_sec5",
    "initial_states": [[0.1, 0.1], [0.05, 0.1], [0.1, 0.1], [0.05, 0.1]]
  },
  "fault": { "eta": 0.6, "tau_f": 1.0, "ramp_width": 0.1 },
  "gains": {
    "delta1": 0.5,
    "gamma": [5.0, 10.0],
    "xi": [0.01],
    "lambda": [0.005, 0.005]
  },
  "rbf": {
    "node_count": 25,
    "width": 2.0,
    "input_box": [-2.0, 2.0],
    "weight_bound": 10.0
  },
  "triggers": { "dx_self": 0.001, "dx_neighbor": 0.001, "du": 0.01 },
  "sim": {
    "dt": 0.001,
    "t_end": 20.0,
    "mode": "event_triggered",
    "divergence_limit": 1000.0
  },
  "sector_check": {
    "samples": 20000,
    "seed": 1,
    "levels": [
      {
        "level": 1,
        "box": [[-3.0, 3.0], [-3.0, 3.0]],
        "ell_lower": 1.0, "phi1": 0.0,
        "ell_upper": 2.81, "phi2": 0.0,
        "ell_lower_prime": 1.0, "phi1_prime": -5.5,
        "ell_upper_prime": 1.0, "phi2_prime": 0.0
      },
      {
        "level": 2,
        "box": [[-3.0, 3.0], [-3.0, 3.0], [-20.0, 20.0]],
        "ell_lower": 1.0, "phi1": 0.0,
        "ell_upper": 58.2, "phi2": 0.0,
        "ell_lower_prime": 1.0, "phi1_prime": -1143.0,
        "ell_upper_prime": 1.0, "phi2_prime": 0.0
      }
    ]
  }
})json";

}  // namespace

const char* sim_mode_name(SimMode mode) {
  switch (mode) {
    case SimMode::nominal: return "nominal";
    case SimMode::event_triggered: return "event_triggered";
    case SimMode::twin: return "twin";
  }
  return "unknown";
}

SimMode parse_sim_mode(const std::string& text) {
  if (text == "nominal") return SimMode::nominal;
  if (text == "event_triggered" || text == "event") return SimMode::event_triggered;
  if (text == "twin") return SimMode::twin;
  raise(ErrorCode::schema_error,
        "sim.mode: expected nominal | event_triggered | twin, got '" + text + "'");
}

std::size_t ScenarioConfig::order() const { return find_plant(plant_name).order; }

ScenarioConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    raise(ErrorCode::schema_error, std::string("config: ") + e.what());
  }
  if (!root.is_object()) schema_fail("config", "top level must be an object");
  check_keys(root, "config",
             {"graph", "plant", "fault", "gains", "rbf", "triggers", "sim",
              "sector_check"});

  ScenarioConfig cfg;

  {
    const json& graph = require(root, "config", "graph");
    if (!graph.is_object()) schema_fail("graph", "expected an object");
    check_keys(graph, "graph", {"adjacency"});
    cfg.adjacency = as_matrix(require(graph, "graph", "adjacency"), "graph.adjacency");
  }

  {
    const json& plant = require(root, "config", "plant");
    if (!plant.is_object()) schema_fail("plant", "expected an object");
    check_keys(plant, "plant", {"name", "initial_states"});
    cfg.plant_name = as_string(require(plant, "plant", "name"), "plant.name");
    cfg.initial_states = as_matrix(require(plant, "plant", "initial_states"),
                                   "plant.initial_states");
  }

  const std::size_t n_agents = cfg.adjacency.size();

  {
    auto per_agent = [&](const json& obj, const char* key,
                         double sentinel) -> std::vector<double> {
      std::vector<double> out(n_agents, sentinel);
      auto it = obj.find(key);
      if (it == obj.end()) return out;
      const std::string path = std::string("fault.") + key;
      if (it->is_array()) {
        out = as_number_array(*it, path);
        if (out.size() != n_agents)
          schema_fail(path, "array must have one entry per agent");
      } else {
        out.assign(n_agents, as_number(*it, path));
      }
      return out;
    };

    std::vector<double> eta(n_agents, 1.0);
    std::vector<double> eta_lower(n_agents, -1.0);      // sentinel: derive
    std::vector<double> eta_dot_bound(n_agents, -1.0);  // sentinel: derive
    double tau_f = 0.0;
    double ramp_width = 0.1;
    bool dot_bound_unbounded = false;
    if (auto it = root.find("fault"); it != root.end()) {
      const json& fault = *it;
      if (!fault.is_object()) schema_fail("fault", "expected an object");
      check_keys(fault, "fault",
                 {"eta", "tau_f", "ramp_width", "eta_lower", "eta_dot_bound"});
      eta = per_agent(fault, "eta", 1.0);
      eta_lower = per_agent(fault, "eta_lower", -1.0);
      tau_f = number_or(fault, "fault", "tau_f", tau_f);
      ramp_width = number_or(fault, "fault", "ramp_width", ramp_width);
      if (auto b = fault.find("eta_dot_bound"); b != fault.end() && b->is_null())
        dot_bound_unbounded = true;
      else
        eta_dot_bound = per_agent(fault, "eta_dot_bound", -1.0);
    }
    cfg.faults.resize(n_agents);
    for (std::size_t i = 0; i < n_agents; ++i) {
      SensorFaultModel& f = cfg.faults[i];
      f.eta_target = eta[i];
      f.tau_f = tau_f;
      f.ramp_width = ramp_width;
      f.eta_lower = eta_lower[i] > 0.0 ? eta_lower[i] : 0.5 * f.eta_target;
      if (dot_bound_unbounded) {
        f.eta_dot_bound = kInf;
      } else if (eta_dot_bound[i] > 0.0) {
        f.eta_dot_bound = eta_dot_bound[i];
      } else {
        const double analytic = f.eta_dot_max();
        f.eta_dot_bound = std::isfinite(analytic) && analytic > 0.0
                              ? 1.05 * analytic
                              : kInf;
      }
    }
  }

  {
    const json& gains = require(root, "config", "gains");
    if (!gains.is_object()) schema_fail("gains", "expected an object");
    check_keys(gains, "gains", {"delta1", "gamma", "xi", "lambda"});
    cfg.gains.delta1 = as_number(require(gains, "gains", "delta1"), "gains.delta1");
    cfg.gains.gamma = as_number_array(require(gains, "gains", "gamma"), "gains.gamma");
    cfg.gains.lambda =
        as_number_array(require(gains, "gains", "lambda"), "gains.lambda");
    if (auto it = gains.find("xi"); it != gains.end())
      cfg.gains.xi = as_number_array(*it, "gains.xi");
  }

  if (auto it = root.find("rbf"); it != root.end()) {
    const json& rbf = *it;
    if (!rbf.is_object()) schema_fail("rbf", "expected an object");
    check_keys(rbf, "rbf", {"node_count", "width", "input_box", "weight_bound"});
    if (auto c = rbf.find("node_count"); c != rbf.end())
      cfg.rbf.node_count = as_count(*c, "rbf.node_count");
    cfg.rbf.width = number_or(rbf, "rbf", "width", cfg.rbf.width);
    if (auto b = rbf.find("input_box"); b != rbf.end()) {
      const auto box = as_number_array(*b, "rbf.input_box");
      if (box.size() != 2) schema_fail("rbf.input_box", "expected [lo, hi]");
      cfg.rbf.box_lo = box[0];
      cfg.rbf.box_hi = box[1];
    }
    cfg.rbf.weight_bound = number_or(rbf, "rbf", "weight_bound", cfg.rbf.weight_bound);
  }

  if (auto it = root.find("triggers"); it != root.end()) {
    const json& tr = *it;
    if (!tr.is_object()) schema_fail("triggers", "expected an object");
    check_keys(tr, "triggers", {"dx_self", "dx_neighbor", "du"});
    cfg.thresholds.dx_self = number_or(tr, "triggers", "dx_self", cfg.thresholds.dx_self);
    cfg.thresholds.dx_neighbor =
        number_or(tr, "triggers", "dx_neighbor", cfg.thresholds.dx_neighbor);
    cfg.thresholds.du = number_or(tr, "triggers", "du", cfg.thresholds.du);
  }

  if (auto it = root.find("sim"); it != root.end()) {
    const json& sim = *it;
    if (!sim.is_object()) schema_fail("sim", "expected an object");
    check_keys(sim, "sim", {"dt", "t_end", "mode", "divergence_limit"});
    cfg.dt = number_or(sim, "sim", "dt", cfg.dt);
    cfg.t_end = number_or(sim, "sim", "t_end", cfg.t_end);
    if (auto m = sim.find("mode"); m != sim.end())
      cfg.mode = parse_sim_mode(as_string(*m, "sim.mode"));
    cfg.divergence_limit =
        number_or(sim, "sim", "divergence_limit", cfg.divergence_limit);
  }

  if (auto it = root.find("sector_check"); it != root.end()) {
    const json& sc = *it;
    if (!sc.is_object()) schema_fail("sector_check", "expected an object");
    check_keys(sc, "sector_check", {"samples", "seed", "levels"});
    SectorCheckConfig scc;
    if (auto s = sc.find("samples"); s != sc.end())
      scc.samples = as_count(*s, "sector_check.samples");
    if (auto s = sc.find("seed"); s != sc.end())
      scc.seed = as_count(*s, "sector_check.seed");
    const json& levels = require(sc, "sector_check", "levels");
    if (!levels.is_array()) schema_fail("sector_check.levels", "expected an array");
    for (std::size_t i = 0; i < levels.size(); ++i) {
      const std::string path = "sector_check.levels[" + std::to_string(i) + "]";
      const json& lv = levels[i];
      if (!lv.is_object()) schema_fail(path, "expected an object");
      check_keys(lv, path,
                 {"level", "box", "ell_lower", "ell_upper", "phi1", "phi2",
                  "ell_lower_prime", "ell_upper_prime", "phi1_prime", "phi2_prime"});
      SectorCheckLevel out;
      out.level = as_count(require(lv, path, "level"), path + ".level");
      const auto box = as_matrix(require(lv, path, "box"), path + ".box");
      for (std::size_t d = 0; d < box.size(); ++d) {
        if (box[d].size() != 2)
          schema_fail(path + ".box[" + std::to_string(d) + "]", "expected [lo, hi]");
        out.box.lo.push_back(box[d][0]);
        out.box.hi.push_back(box[d][1]);
      }
      out.bounds.ell_lower = as_number(require(lv, path, "ell_lower"), path + ".ell_lower");
      out.bounds.ell_upper = as_number(require(lv, path, "ell_upper"), path + ".ell_upper");
      out.bounds.phi_k1 = number_or(lv, path, "phi1", 0.0);
      out.bounds.phi_k2 = number_or(lv, path, "phi2", 0.0);
      out.bounds.ell_lower_prime =
          as_number(require(lv, path, "ell_lower_prime"), path + ".ell_lower_prime");
      out.bounds.ell_upper_prime =
          as_number(require(lv, path, "ell_upper_prime"), path + ".ell_upper_prime");
      out.bounds.phi_k1_prime = number_or(lv, path, "phi1_prime", 0.0);
      out.bounds.phi_k2_prime = number_or(lv, path, "phi2_prime", 0.0);
      scc.levels.push_back(std::move(out));
    }
    cfg.sector_check = std::move(scc);
  }

  validate_config(cfg);
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::io_error, "cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

ScenarioConfig builtin_config(const std::string& name) {
  if (name == "paper_sec5") return parse_config(kPaperSec5Json);
  raise(ErrorCode::invalid_argument,
        "unknown builtin config '" + name + "' (known: paper_sec5)");
}

std::vector<std::string> builtin_config_names() { return {"paper_sec5"}; }

void validate_config(const ScenarioConfig& cfg) {
  const std::size_t n_agents = cfg.adjacency.size();
  if (n_agents == 0) invalid("graph.adjacency", "at least one agent required");

  // Propagates non_symmetric/negative_weight/nonzero_diagonal as-is.
  const GraphTopology g = build_graph(cfg.adjacency);
  if (!is_connected(g))
    invalid("graph.adjacency",
            "graph is not connected (undirected connected topology assumed)");

  const std::size_t order = cfg.order();  // raises unknown_plant

  if (cfg.initial_states.size() != n_agents)
    invalid("plant.initial_states", "expected one state vector per agent");
  double max_abs_x0 = 0.0;
  for (std::size_t i = 0; i < n_agents; ++i) {
    if (cfg.initial_states[i].size() != order)
      invalid("plant.initial_states[" + std::to_string(i) + "]",
              "expected " + std::to_string(order) + " states");
    for (double x : cfg.initial_states[i]) {
      if (!std::isfinite(x))
        invalid("plant.initial_states", "entries must be finite");
      max_abs_x0 = std::max(max_abs_x0, std::abs(x));
    }
  }

  if (cfg.faults.size() != n_agents)
    invalid("fault", "expected one fault model per agent");
  for (std::size_t i = 0; i < n_agents; ++i) {
    const SensorFaultModel& f = cfg.faults[i];
    const std::string path = "fault (agent " + std::to_string(i + 1) + ")";
    if (!(f.eta_target > 0.0 && f.eta_target <= 1.0))
      invalid("fault.eta", "fault factor must lie in (0, 1]");
    if (!(f.tau_f >= 0.0)) invalid("fault.tau_f", "onset time must be >= 0");
    if (!(f.ramp_width >= 0.0)) invalid("fault.ramp_width", "must be >= 0");
    if (!(f.eta_lower > 0.0 && f.eta_lower < f.eta_target))
      invalid("fault.eta_lower",
              "must satisfy 0 < eta_lower < eta so the assumed bound is strict");
    if (!(f.eta_dot_bound > 0.0)) invalid("fault.eta_dot_bound", "must be > 0");
    if (std::isfinite(f.eta_dot_bound) && f.eta_dot_max() >= f.eta_dot_bound)
      invalid("fault.eta_dot_bound",
              "below the analytic ramp slope " + std::to_string(f.eta_dot_max()) +
                  " at " + path);
  }

  cfg.gains.validate(order);

  if (cfg.rbf.node_count < 1) invalid("rbf.node_count", "must be >= 1");
  if (order >= 2) {
    const auto side = static_cast<std::size_t>(
        std::llround(std::sqrt(static_cast<double>(cfg.rbf.node_count))));
    if (side * side != cfg.rbf.node_count)
      invalid("rbf.node_count",
              "must be a perfect square for multi-dimensional NN inputs");
  }
  if (!(cfg.rbf.width > 0.0)) invalid("rbf.width", "must be > 0");
  if (!(cfg.rbf.box_lo < cfg.rbf.box_hi)) invalid("rbf.input_box", "lo must be < hi");
  if (!(cfg.rbf.weight_bound > 0.0)) invalid("rbf.weight_bound", "must be > 0");

  if (!(cfg.thresholds.dx_self > 0.0)) invalid("triggers.dx_self", "must be > 0");
  if (!(cfg.thresholds.dx_neighbor > 0.0))
    invalid("triggers.dx_neighbor", "must be > 0");
  if (!(cfg.thresholds.du > 0.0)) invalid("triggers.du", "must be > 0");

  if (!(cfg.dt > 0.0)) invalid("sim.dt", "must be > 0");
  if (!(cfg.t_end >= cfg.dt)) invalid("sim.t_end", "must be >= dt");
  for (double xi : cfg.gains.xi)
    if (cfg.dt > xi)
      invalid("sim.dt", "dt " + std::to_string(cfg.dt) +
                            " exceeds filter constant " + std::to_string(xi) +
                            " (explicit filter substep would be unstable)");
  if (!(cfg.divergence_limit > max_abs_x0))
    invalid("sim.divergence_limit", "must exceed the largest initial |x|");

  if (cfg.sector_check) {
    const auto& sc = *cfg.sector_check;
    if (sc.samples < 10000) invalid("sector_check.samples", "must be >= 10000");
    for (const auto& lv : sc.levels) {
      if (lv.level < 1 || lv.level > order)
        invalid("sector_check.levels", "level out of range");
      if (lv.box.lo.size() != lv.level + 1)
        invalid("sector_check.levels",
                "box needs level+1 coordinate ranges (states then v)");
    }
  }
}

namespace {

json resolved_json_value(const ScenarioConfig& cfg) {
  json root;
  root["graph"]["adjacency"] = cfg.adjacency;
  root["plant"]["name"] = cfg.plant_name;
  root["plant"]["initial_states"] = cfg.initial_states;

  json fault;
  json eta = json::array();
  json eta_lower = json::array();
  json eta_dot_bound = json::array();
  bool any_unbounded = false;
  for (const auto& f : cfg.faults) {
    eta.push_back(f.eta_target);
    eta_lower.push_back(f.eta_lower);
    eta_dot_bound.push_back(f.eta_dot_bound);
    any_unbounded = any_unbounded || !std::isfinite(f.eta_dot_bound);
  }
  fault["eta"] = eta;
  fault["eta_lower"] = eta_lower;
  fault["tau_f"] = cfg.faults.empty() ? 0.0 : cfg.faults[0].tau_f;
  fault["ramp_width"] = cfg.faults.empty() ? 0.1 : cfg.faults[0].ramp_width;
  if (any_unbounded)
    fault["eta_dot_bound"] = nullptr;  // null encodes "unbounded"
  else
    fault["eta_dot_bound"] = eta_dot_bound;
  root["fault"] = fault;

  root["gains"]["delta1"] = cfg.gains.delta1;
  root["gains"]["gamma"] = cfg.gains.gamma;
  root["gains"]["xi"] = cfg.gains.xi;
  root["gains"]["lambda"] = cfg.gains.lambda;

  root["rbf"]["node_count"] = cfg.rbf.node_count;
  root["rbf"]["width"] = cfg.rbf.width;
  root["rbf"]["input_box"] = {cfg.rbf.box_lo, cfg.rbf.box_hi};
  root["rbf"]["weight_bound"] = cfg.rbf.weight_bound;

  root["triggers"]["dx_self"] = cfg.thresholds.dx_self;
  root["triggers"]["dx_neighbor"] = cfg.thresholds.dx_neighbor;
  root["triggers"]["du"] = cfg.thresholds.du;

  root["sim"]["dt"] = cfg.dt;
  root["sim"]["t_end"] = cfg.t_end;
  root["sim"]["mode"] = sim_mode_name(cfg.mode);
  root["sim"]["divergence_limit"] = cfg.divergence_limit;

  if (cfg.sector_check) {
    json sc;
    sc["samples"] = cfg.sector_check->samples;
    sc["seed"] = cfg.sector_check->seed;
    sc["levels"] = json::array();
    for (const auto& lv : cfg.sector_check->levels) {
      json j;
      j["level"] = lv.level;
      json box = json::array();
      for (std::size_t d = 0; d < lv.box.lo.size(); ++d)
        box.push_back({lv.box.lo[d], lv.box.hi[d]});
      j["box"] = box;
      j["ell_lower"] = lv.bounds.ell_lower;
      j["ell_upper"] = lv.bounds.ell_upper;
      j["phi1"] = lv.bounds.phi_k1;
      j["phi2"] = lv.bounds.phi_k2;
      j["ell_lower_prime"] = lv.bounds.ell_lower_prime;
      j["ell_upper_prime"] = lv.bounds.ell_upper_prime;
      j["phi1_prime"] = lv.bounds.phi_k1_prime;
      j["phi2_prime"] = lv.bounds.phi_k2_prime;
      sc["levels"].push_back(j);
    }
    root["sector_check"] = sc;
  }
  return root;
}

}  // namespace

std::string resolved_config_json(const ScenarioConfig& cfg) {
  return resolved_json_value(cfg).dump(2) + "\n";
}

std::string config_hash(const ScenarioConfig& cfg) {
  const std::uint64_t h = fnv1a64(resolved_json_value(cfg).dump());
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace etcsim
