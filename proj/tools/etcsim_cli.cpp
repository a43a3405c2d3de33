// Batch front end for the etcsim shared library. Talks to the engine purely
// through the C API in etcsim.h.

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "etcsim.h"

namespace {

struct ConfigDeleter {
  void operator()(etcsim_config* c) const { etcsim_config_free(c); }
};
struct ResultDeleter {
  void operator()(etcsim_result* r) const { etcsim_result_free(r); }
};
using ConfigPtr = std::unique_ptr<etcsim_config, ConfigDeleter>;
using ResultPtr = std::unique_ptr<etcsim_result, ResultDeleter>;

int fail(etcsim_status status, const char* what) {
  std::fprintf(stderr, "error: %s: %s (%s)\n", what, etcsim_last_error(),
               etcsim_status_name(status));
  return 1;
}

struct CommonOpts {
  std::string config_path;
  std::string out_dir = "out";
  std::string mode;
  double dt = 0.0;
  double t_end = 0.0;
};

int load_config(const CommonOpts& opts, ConfigPtr& config) {
  etcsim_config* raw = nullptr;
  etcsim_status status = etcsim_config_from_file(opts.config_path.c_str(), &raw);
  if (status != ETCSIM_OK) return fail(status, opts.config_path.c_str());
  config.reset(raw);
  if (!opts.mode.empty()) {
    status = etcsim_config_set_mode(config.get(), opts.mode.c_str());
    if (status != ETCSIM_OK) return fail(status, "--mode");
  }
  if (opts.dt > 0.0) {
    status = etcsim_config_set_dt(config.get(), opts.dt);
    if (status != ETCSIM_OK) return fail(status, "--dt");
  }
  if (opts.t_end > 0.0) {
    status = etcsim_config_set_t_end(config.get(), opts.t_end);
    if (status != ETCSIM_OK) return fail(status, "--t-end");
  }
  return 0;
}

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_out) {
  cmd->add_option("--config", opts.config_path, "scenario config (JSON)")
      ->required();
  if (with_out)
    cmd->add_option("--out", opts.out_dir, "output directory (default: out)");
  cmd->add_option("--mode", opts.mode, "override sim.mode")
      ->check(CLI::IsMember({"nominal", "event", "event_triggered", "twin"}));
  cmd->add_option("--dt", opts.dt, "override sim.dt");
  cmd->add_option("--t-end", opts.t_end, "override sim.t_end");
}

int cmd_run(const CommonOpts& opts) {
  ConfigPtr config;
  if (int rc = load_config(opts, config)) return rc;

  etcsim_result* raw = nullptr;
  etcsim_status status = etcsim_run(config.get(), &raw);
  if (status != ETCSIM_OK) return fail(status, "run");
  ResultPtr result(raw);

  status = etcsim_result_write(result.get(), opts.out_dir.c_str());
  if (status != ETCSIM_OK) return fail(status, opts.out_dir.c_str());

  char* summary = nullptr;
  if (etcsim_result_summary(result.get(), &summary) == ETCSIM_OK) {
    std::fputs(summary, stdout);
    etcsim_string_free(summary);
  }
  std::printf("outputs written to %s\n", opts.out_dir.c_str());
  return 0;
}

int cmd_sweep(const CommonOpts& opts, const std::vector<std::string>& set_specs) {
  ConfigPtr config;
  if (int rc = load_config(opts, config)) return rc;

  std::vector<double> sets;
  if (set_specs.empty()) {
    // the bundled comparison pair
    sets = {0.001, 0.001, 0.01, 0.002, 0.005, 0.05};
  } else {
    for (const auto& spec : set_specs) {
      double a = 0.0, b = 0.0, c = 0.0;
      if (std::sscanf(spec.c_str(), "%lf,%lf,%lf", &a, &b, &c) != 3) {
        std::fprintf(stderr, "error: --set expects dx_self,dx_neighbor,du (got '%s')\n",
                     spec.c_str());
        return 1;
      }
      sets.insert(sets.end(), {a, b, c});
    }
    if (sets.size() < 6) {
      std::fprintf(stderr, "error: sweep needs at least two --set triples\n");
      return 1;
    }
  }

  char* table = nullptr;
  etcsim_status status = etcsim_sweep(config.get(), sets.data(), sets.size() / 3,
                                      opts.out_dir.c_str(), &table);
  if (status != ETCSIM_OK) return fail(status, "sweep");
  std::fputs(table, stdout);
  etcsim_string_free(table);
  std::printf("comparison.csv written to %s\n", opts.out_dir.c_str());
  return 0;
}

int cmd_validate(const CommonOpts& opts) {
  ConfigPtr config;
  if (int rc = load_config(opts, config)) return rc;

  char hash[17] = {0};
  etcsim_status status = etcsim_config_hash(config.get(), hash, sizeof hash);
  if (status != ETCSIM_OK) return fail(status, "hash");
  char* resolved = nullptr;
  status = etcsim_config_resolved_json(config.get(), &resolved);
  if (status != ETCSIM_OK) return fail(status, "resolve");
  std::fputs(resolved, stdout);
  etcsim_string_free(resolved);
  std::printf("config_hash: %s\nvalid\n", hash);
  return 0;
}

int cmd_lemmas(unsigned long long seed) {
  char* text = nullptr;
  int all_pass = 0;
  etcsim_status status = etcsim_lemma_report(seed, &text, &all_pass);
  if (status != ETCSIM_OK) return fail(status, "lemmas");
  std::fputs(text, stdout);
  etcsim_string_free(text);
  std::printf("%s\n", all_pass ? "all properties PASS" : "FAILURES present");
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"event-triggered neuroadaptive consensus simulator"};
  app.require_subcommand(1);

  CommonOpts run_opts;
  CLI::App* run = app.add_subcommand("run", "simulate one scenario and write CSVs");
  add_common(run, run_opts, true);

  CommonOpts sweep_opts;
  std::vector<std::string> set_specs;
  CLI::App* sweep =
      app.add_subcommand("sweep", "compare triggering-threshold sets");
  add_common(sweep, sweep_opts, true);
  sweep->add_option("--set", set_specs,
                    "threshold triple dx_self,dx_neighbor,du (repeatable; "
                    "default: bundled pair)");

  CommonOpts validate_opts;
  CLI::App* validate =
      app.add_subcommand("validate", "parse and echo a config without running");
  add_common(validate, validate_opts, false);

  unsigned long long seed = 20240901ull;
  CLI::App* lemmas =
      app.add_subcommand("lemmas", "run the randomized property suites");
  lemmas->add_option("--seed", seed, "seed for the randomized suites");

  CLI11_PARSE(app, argc, argv);

  if (app.got_subcommand(run)) return cmd_run(run_opts);
  if (app.got_subcommand(sweep)) return cmd_sweep(sweep_opts, set_specs);
  if (app.got_subcommand(validate)) return cmd_validate(validate_opts);
  if (app.got_subcommand(lemmas)) return cmd_lemmas(seed);
  return 1;
}
