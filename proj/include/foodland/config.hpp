#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "foodland/params.hpp"
#include "foodland/scenario.hpp"

namespace foodland {

// Everything a run needs beyond the CLI verbs: model parameters plus ensemble
// and output settings. Loaded from a flat "key = value" text file; every key
// is optional and unknown keys are rejected.
struct RunConfig {
  ModelParams params{};
  int n_runs = 500;
  std::uint64_t master_seed = 20220101;
  int n_threads = 0;  // 0 = number of hardware threads
  std::string out_dir = "out";
  std::string drivers = "builtin";  // "builtin" or a driver CSV path
  std::vector<int> snapshot_years;
  bool keep_going = false;

  // Keys explicitly present in the loaded file (used e.g. to decide whether
  // the builtin-driver demand scale should replace the default one).
  std::set<std::string> overridden;

  bool was_set(const std::string& key) const { return overridden.count(key) != 0; }
};

// Names of every recognized config key, sorted.
std::vector<std::string> config_keys();

// Parses config text; `origin` labels error messages (usually the file name).
// Throws ConfigError with a line number on malformed lines, unknown keys or
// unparseable values. The result is validated.
RunConfig parse_config_text(const std::string& text, const std::string& origin);

RunConfig load_config(const std::string& path);

// Serializes every key in sorted order with full round-trip precision.
std::string config_to_text(const RunConfig& cfg);

// Scenario files list one policy per line: "policies.<kind> = <magnitude>".
// Blank lines and '#' comments are allowed, duplicate kinds are rejected.
Portfolio parse_scenario_text(const std::string& text, const std::string& origin);

Portfolio load_scenario(const std::string& path);

std::string scenario_to_text(const Portfolio& portfolio);

}  // namespace foodland
