// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "agentharness/denoise.hpp"
#include "agentharness/http_backend.hpp"
#include "agentharness/json_io.hpp"
#include "agentharness/policy.hpp"
#include "agentharness/react.hpp"

namespace ah {

/// How one module role gets its completions.
///   scripted          inline "script" or "script_file"
///   from_task         the per-task script for this role inside the suite
///   http              OpenAI-compatible endpoint
///   rule_editor       offline deterministic editor
///   keyword_selector  offline deterministic selector
struct BackendSpec {
  std::string type;
  std::optional<PolicyScript> script;
  HttpBackendConfig http;
  double tokens_per_second = 50.0;  // offline module backends
};

/// One cell of the module ablation grid. A module runs only when the cell
/// enables it and a backend for its role is configured.
struct AblationCell {
  std::string label;
  bool memory = true;
  bool verifier = true;
  bool selector = true;
  bool editor = true;

  friend bool operator==(const AblationCell&, const AblationCell&) = default;
};

struct RunConfig {
  std::string config_dir;  // relative paths resolve against this
  std::vector<std::string> suites;
  std::optional<std::string> manifest;
  std::optional<std::size_t> manifest_cap;  // default: the manifest's cap
  std::string output_dir = "out";
  std::uint64_t seed = 42;
  int workers = 1;
  int retry_threshold = 3;
  std::optional<int> step_limit;
  int k_mem = 5;
  int retain_last = 2;
  int k_earlyexit = 5;
  EarlyExitMode early_exit_mode = EarlyExitMode::terminate;
  std::string early_exit_instruction;
  int max_batches_per_turn = 8;
  GateConfig gate;
  GenParams agent_params;
  GenParams module_params;
  std::map<std::string, BackendSpec> backends;  // agent, memory, verifier, selector, editor
  std::vector<AblationCell> ablation;           // never empty after loading

  std::string resolve(const std::string& path) const;
};

/// Strict: unknown keys are rejected with their path; defaults filled in.
RunConfig config_from_json(const Json& j, const std::string& path, const std::string& config_dir);
RunConfig load_config(const std::string& path);

/// Every key load_config accepts, with its meaning (for --help and docs).
const std::vector<std::pair<std::string, std::string>>& config_keys();

}  // namespace ah
