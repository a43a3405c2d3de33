#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "etcsim.h"

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_SUITE("capi") {

TEST_CASE("builtin config loads, resolves and hashes") {
  etcsim_config* config = nullptr;
  REQUIRE(etcsim_config_builtin("paper_sec5", &config) == ETCSIM_OK);

  char hash[17] = {0};
  CHECK(etcsim_config_hash(config, hash, sizeof hash) == ETCSIM_OK);
  CHECK(std::strlen(hash) == 16);

  char* resolved = nullptr;
  REQUIRE(etcsim_config_resolved_json(config, &resolved) == ETCSIM_OK);
  CHECK(std::string(resolved).find("\"event_triggered\"") != std::string::npos);

  // resolved echo parses back to the same hash
  etcsim_config* again = nullptr;
  REQUIRE(etcsim_config_from_json(resolved, &again) == ETCSIM_OK);
  char hash2[17] = {0};
  CHECK(etcsim_config_hash(again, hash2, sizeof hash2) == ETCSIM_OK);
  CHECK(std::string(hash) == hash2);

  etcsim_string_free(resolved);
  etcsim_config_free(again);
  etcsim_config_free(config);
}

TEST_CASE("error paths set codes and messages") {
  etcsim_config* config = nullptr;
  CHECK(etcsim_config_from_json("{ not json", &config) == ETCSIM_ERR_SCHEMA);
  CHECK(std::strlen(etcsim_last_error()) > 0);

  CHECK(etcsim_config_builtin("nope", &config) == ETCSIM_ERR_INVALID_ARGUMENT);
  CHECK(etcsim_config_from_file("/no/such/path.json", &config) == ETCSIM_ERR_IO);

  const char* unknown_plant = R"({
    "graph": { "adjacency": [[0, 1], [1, 0]] },
    "plant": { "name": "warp_drive", "initial_states": [[0.1, 0.1], [0.05, 0.1]] },
    "gains": { "delta1": 0.5, "gamma": [5.0, 10.0], "xi": [0.01],
               "lambda": [0.005, 0.005] }
  })";
  CHECK(etcsim_config_from_json(unknown_plant, &config) == ETCSIM_ERR_UNKNOWN_PLANT);
  CHECK(std::string(etcsim_status_name(ETCSIM_ERR_UNKNOWN_PLANT)) == "unknown_plant");
}

TEST_CASE("run, metrics and file outputs") {
  etcsim_config* config = nullptr;
  REQUIRE(etcsim_config_builtin("paper_sec5", &config) == ETCSIM_OK);
  REQUIRE(etcsim_config_set_t_end(config, 0.5) == ETCSIM_OK);

  etcsim_result* result = nullptr;
  REQUIRE(etcsim_run(config, &result) == ETCSIM_OK);
  CHECK(etcsim_result_agent_count(result) == 4);
  CHECK(etcsim_result_row_count(result) == 501);

  double value = 0.0;
  CHECK(etcsim_result_metric(result, "max_abs_x", &value) == ETCSIM_OK);
  CHECK(value > 0.0);
  CHECK(value < 10.0);
  CHECK(etcsim_result_metric(result, "events_self", &value) == ETCSIM_OK);
  CHECK(value >= 8.0);
  CHECK(etcsim_result_metric(result, "lemma3_violations", &value) == ETCSIM_OK);
  CHECK(value == 0.0);
  CHECK(etcsim_result_metric(result, "no_such_metric", &value) ==
        ETCSIM_ERR_INVALID_ARGUMENT);

  const auto dir = std::filesystem::temp_directory_path() / "etcsim_capi_test";
  std::filesystem::remove_all(dir);
  REQUIRE(etcsim_result_write(result, dir.string().c_str()) == ETCSIM_OK);
  CHECK(std::filesystem::exists(dir / "trajectories.csv"));
  CHECK(std::filesystem::exists(dir / "events.csv"));
  CHECK(std::filesystem::exists(dir / "summary.txt"));
  CHECK(std::filesystem::exists(dir / "resolved_config.json"));
  CHECK(slurp(dir / "summary.txt").find("projection_bound: OK") != std::string::npos);

  char* summary = nullptr;
  REQUIRE(etcsim_result_summary(result, &summary) == ETCSIM_OK);
  CHECK(std::string(summary) == slurp(dir / "summary.txt"));
  etcsim_string_free(summary);

  etcsim_result_free(result);
  etcsim_config_free(config);
  std::filesystem::remove_all(dir);
}

TEST_CASE("twin override produces gap metrics") {
  etcsim_config* config = nullptr;
  REQUIRE(etcsim_config_builtin("paper_sec5", &config) == ETCSIM_OK);
  REQUIRE(etcsim_config_set_t_end(config, 0.2) == ETCSIM_OK);
  REQUIRE(etcsim_config_set_mode(config, "twin") == ETCSIM_OK);
  REQUIRE(etcsim_config_set_thresholds(config, 1e-12, 1e-12, 1e-12) == ETCSIM_OK);

  etcsim_result* result = nullptr;
  REQUIRE(etcsim_run(config, &result) == ETCSIM_OK);
  double gap = 1.0;
  CHECK(etcsim_result_metric(result, "twin_gap_x", &gap) == ETCSIM_OK);
  CHECK(gap <= 1e-9);

  const auto dir = std::filesystem::temp_directory_path() / "etcsim_capi_twin";
  std::filesystem::remove_all(dir);
  REQUIRE(etcsim_result_write(result, dir.string().c_str()) == ETCSIM_OK);
  CHECK(std::filesystem::exists(dir / "trajectories_nominal.csv"));

  etcsim_result_free(result);
  etcsim_config_free(config);
  std::filesystem::remove_all(dir);
}

TEST_CASE("sweep writes the comparison table") {
  etcsim_config* config = nullptr;
  REQUIRE(etcsim_config_builtin("paper_sec5", &config) == ETCSIM_OK);
  REQUIRE(etcsim_config_set_t_end(config, 0.3) == ETCSIM_OK);

  const double sets[6] = {0.001, 0.001, 0.01, 0.002, 0.005, 0.05};
  char* table = nullptr;
  const auto dir = std::filesystem::temp_directory_path() / "etcsim_capi_sweep";
  std::filesystem::remove_all(dir);
  REQUIRE(etcsim_sweep(config, sets, 2, dir.string().c_str(), &table) == ETCSIM_OK);
  const std::string csv(table);
  etcsim_string_free(table);
  CHECK(csv.rfind("set,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);  // header + 2 rows
  CHECK(slurp(dir / "comparison.csv") == csv);

  etcsim_config_free(config);
  std::filesystem::remove_all(dir);
}

TEST_CASE("rejected overrides leave the config untouched") {
  etcsim_config* config = nullptr;
  REQUIRE(etcsim_config_builtin("paper_sec5", &config) == ETCSIM_OK);
  char before[17] = {0};
  REQUIRE(etcsim_config_hash(config, before, sizeof before) == ETCSIM_OK);

  // dt above the smallest filter constant fails validation
  CHECK(etcsim_config_set_dt(config, 0.02) == ETCSIM_ERR_VALIDATION);
  CHECK(std::string(etcsim_last_error()).find("sim.dt") != std::string::npos);
  CHECK(etcsim_config_set_thresholds(config, -1.0, 0.001, 0.01) ==
        ETCSIM_ERR_VALIDATION);

  char after[17] = {0};
  REQUIRE(etcsim_config_hash(config, after, sizeof after) == ETCSIM_OK);
  CHECK(std::string(before) == after);
  etcsim_config_free(config);
}

TEST_CASE("version and status names") {
  CHECK(std::strlen(etcsim_version()) > 0);
  CHECK(std::string(etcsim_status_name(ETCSIM_OK)) == "ok");
}

}  // TEST_SUITE
