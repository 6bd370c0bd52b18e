#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "stirap/config.hpp"

namespace stirap {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

struct CommandOptions {
  std::string out_dir = "out";
  std::size_t threads = 1;
  // Leaves wall-clock time out of the summary so repeated runs are byte-identical.
  bool deterministic = false;
};

struct ScenarioEntry {
  std::string id;
  std::string path;
  std::string description;
  std::vector<std::string> tags;
  int group = 0;
};

// STIRAP_SCENARIO_DIR when set, else the directory the build was configured with.
std::string scenario_directory();
std::vector<ScenarioEntry> list_scenarios();
// Existing file path, or the id of a bundled scenario. ConfigError otherwise.
ScenarioConfig resolve_config(const std::string& path_or_id);

// FNV-1a 64 of the canonical config document, as 16 hex digits.
std::string config_hash(const ScenarioConfig& config);

// Each returns an exit code and reports errors on `err`. Numeric failures
// also leave error.json in the output directory.
int cmd_run(const std::string& config, const CommandOptions& options, std::ostream& err);
int cmd_sweep(const std::string& config, const CommandOptions& options, std::ostream& err);
int cmd_analyze(const std::string& config, const CommandOptions& options, std::ostream& err);
int cmd_list_scenarios(std::ostream& out, std::ostream& err);

}  // namespace stirap
