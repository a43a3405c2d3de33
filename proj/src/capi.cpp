#include "etcsim.h"

#include <cstring>
#include <exception>
#include <filesystem>
#include <fstream>
#include <string>

#include "etcsim/config.hpp"
#include "etcsim/engine.hpp"
#include "etcsim/error.hpp"
#include "etcsim/lemmas.hpp"
#include "etcsim/report.hpp"

struct etcsim_config {
  etcsim::ScenarioConfig cfg;
};

struct etcsim_result {
  etcsim::RunOutput output;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& text) {
  char* out = new char[text.size() + 1];
  std::memcpy(out, text.data(), text.size() + 1);
  return out;
}

template <typename Fn>
etcsim_status guarded(Fn&& fn) {
  try {
    fn();
    return ETCSIM_OK;
  } catch (const etcsim::Error& e) {
    g_last_error = e.what();
    return static_cast<etcsim_status>(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return ETCSIM_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return ETCSIM_ERR_INTERNAL;
  }
}

etcsim_status fail_invalid(const char* message) {
  g_last_error = message;
  return ETCSIM_ERR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* etcsim_version(void) { return "1.0.0"; }

const char* etcsim_status_name(etcsim_status status) {
  return etcsim::error_code_name(static_cast<etcsim::ErrorCode>(status));
}

const char* etcsim_last_error(void) { return g_last_error.c_str(); }

void etcsim_string_free(char* text) { delete[] text; }

etcsim_status etcsim_config_from_json(const char* json_text, etcsim_config** out) {
  if (!json_text || !out) return fail_invalid("null argument");
  return guarded([&] {
    *out = new etcsim_config{etcsim::parse_config(json_text)};
  });
}

etcsim_status etcsim_config_from_file(const char* path, etcsim_config** out) {
  if (!path || !out) return fail_invalid("null argument");
  return guarded([&] { *out = new etcsim_config{etcsim::load_config(path)}; });
}

etcsim_status etcsim_config_builtin(const char* name, etcsim_config** out) {
  if (!name || !out) return fail_invalid("null argument");
  return guarded([&] { *out = new etcsim_config{etcsim::builtin_config(name)}; });
}

void etcsim_config_free(etcsim_config* config) { delete config; }

etcsim_status etcsim_config_set_mode(etcsim_config* config, const char* mode) {
  if (!config || !mode) return fail_invalid("null argument");
  return guarded([&] { config->cfg.mode = etcsim::parse_sim_mode(mode); });
}

etcsim_status etcsim_config_set_dt(etcsim_config* config, double dt) {
  if (!config) return fail_invalid("null argument");
  return guarded([&] {
    etcsim::ScenarioConfig next = config->cfg;
    next.dt = dt;
    etcsim::validate_config(next);
    config->cfg = std::move(next);
  });
}

etcsim_status etcsim_config_set_t_end(etcsim_config* config, double t_end) {
  if (!config) return fail_invalid("null argument");
  return guarded([&] {
    etcsim::ScenarioConfig next = config->cfg;
    next.t_end = t_end;
    etcsim::validate_config(next);
    config->cfg = std::move(next);
  });
}

etcsim_status etcsim_config_set_thresholds(etcsim_config* config, double dx_self,
                                           double dx_neighbor, double du) {
  if (!config) return fail_invalid("null argument");
  return guarded([&] {
    etcsim::ScenarioConfig next = config->cfg;
    next.thresholds = {dx_self, dx_neighbor, du};
    etcsim::validate_config(next);
    config->cfg = std::move(next);
  });
}

etcsim_status etcsim_config_resolved_json(const etcsim_config* config, char** out) {
  if (!config || !out) return fail_invalid("null argument");
  return guarded([&] { *out = dup_string(etcsim::resolved_config_json(config->cfg)); });
}

etcsim_status etcsim_config_hash(const etcsim_config* config, char* buffer,
                                 size_t buffer_size) {
  if (!config || !buffer) return fail_invalid("null argument");
  if (buffer_size < 17) return fail_invalid("hash buffer must hold 17 bytes");
  return guarded([&] {
    const std::string h = etcsim::config_hash(config->cfg);
    std::memcpy(buffer, h.c_str(), h.size() + 1);
  });
}

etcsim_status etcsim_run(const etcsim_config* config, etcsim_result** out) {
  if (!config || !out) return fail_invalid("null argument");
  return guarded([&] {
    *out = new etcsim_result{etcsim::execute(config->cfg)};
  });
}

size_t etcsim_result_agent_count(const etcsim_result* result) {
  return result ? result->output.primary.agents.size() : 0;
}

size_t etcsim_result_row_count(const etcsim_result* result) {
  return result ? result->output.primary.time.size() : 0;
}

etcsim_status etcsim_result_metric(const etcsim_result* result, const char* name,
                                   double* out) {
  if (!result || !name || !out) return fail_invalid("null argument");
  return guarded([&] {
    const auto metrics = etcsim::metric_map(result->output);
    const auto it = metrics.find(name);
    if (it == metrics.end())
      etcsim::raise(etcsim::ErrorCode::invalid_argument,
                    std::string("unknown metric '") + name + "'");
    *out = it->second;
  });
}

etcsim_status etcsim_result_summary(const etcsim_result* result, char** out) {
  if (!result || !out) return fail_invalid("null argument");
  return guarded([&] { *out = dup_string(etcsim::summary_text(result->output)); });
}

etcsim_status etcsim_result_write(const etcsim_result* result, const char* out_dir) {
  if (!result || !out_dir) return fail_invalid("null argument");
  return guarded([&] { etcsim::write_outputs(result->output, out_dir); });
}

void etcsim_result_free(etcsim_result* result) { delete result; }

etcsim_status etcsim_sweep(const etcsim_config* config,
                           const double* threshold_sets, size_t n_sets,
                           const char* out_dir, char** table_csv) {
  if (!config || !threshold_sets) return fail_invalid("null argument");
  return guarded([&] {
    std::vector<etcsim::TriggerThresholds> sets(n_sets);
    for (size_t s = 0; s < n_sets; ++s)
      sets[s] = {threshold_sets[3 * s], threshold_sets[3 * s + 1],
                 threshold_sets[3 * s + 2]};
    const auto rows = etcsim::compare_thresholds(config->cfg, sets);
    const std::string csv = etcsim::comparison_csv(rows);
    if (out_dir) {
      std::filesystem::create_directories(out_dir);
      std::ofstream file(std::filesystem::path(out_dir) / "comparison.csv",
                         std::ios::binary);
      if (!file)
        etcsim::raise(etcsim::ErrorCode::io_error,
                      std::string("cannot write comparison.csv in '") + out_dir + "'");
      file << csv;
    }
    if (table_csv) *table_csv = dup_string(csv);
  });
}

etcsim_status etcsim_lemma_report(unsigned long long seed, char** report_text,
                                  int* all_pass) {
  return guarded([&] {
    const auto report = etcsim::run_lemma_suites(seed);
    if (report_text) *report_text = dup_string(report.text);
    if (all_pass) *all_pass = report.all_pass ? 1 : 0;
  });
}

}  // extern "C"
