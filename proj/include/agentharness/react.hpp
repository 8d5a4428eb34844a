// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "agentharness/core.hpp"
#include "agentharness/embodied.hpp"
#include "agentharness/policy.hpp"

namespace ah {

struct MemoryState {
  std::string text;
  int last_refresh_step = 0;
  int k_mem = 5;
  int retain_last = 2;  // raw steps kept next to the memory
};

struct VerifierConfig {
  int k_earlyexit = 5;
  bool enabled = false;
};

/// terminate: stop at the first exit verdict. audit: keep running to the
/// natural end and only record where the verifier would have stopped, so
/// redundancy and progress loss can be measured on the same rollout.
enum class EarlyExitMode { terminate, audit };

std::string_view to_string(EarlyExitMode m) noexcept;
std::optional<EarlyExitMode> parse_early_exit_mode(std::string_view s) noexcept;

/// Null memory/verifier handles disable the module.
struct ModuleWiring {
  BackendHandle agent;
  BackendHandle memory;
  BackendHandle verifier;
};

struct EpisodeOptions {
  std::optional<int> step_limit;  // overrides TaskSpec::step_limit
  int k_mem = 5;
  int retain_last = 2;
  int k_earlyexit = 5;
  EarlyExitMode early_exit_mode = EarlyExitMode::terminate;
  std::string early_exit_instruction;  // "" selects the built-in asset
  GenParams agent_params;
  GenParams module_params;
  std::string suite;
  std::string group;
};

struct ReactTurn {
  std::string thought;
  std::string action;
};

/// First "Thought:" and the first "Action:" after it; nullopt without an
/// "Action:" line. The action is the trimmed remainder of that line.
std::optional<ReactTurn> parse_react(std::string_view text);

bool should_invoke_memory(int t, const MemoryState& mem);
bool should_invoke_verifier(int t, const VerifierConfig& cfg);

struct MemoryUpdate {
  MemoryState state;
  std::optional<Completion> completion;  // nullopt when the backend failed
  std::optional<std::string> warning;
};

/// Refreshes the memory at step `t` from `recent` (must be nonempty).
/// Backend failures and empty replies keep the previous text and warn.
MemoryUpdate update_memory(const MemoryState& mem, std::span<const Step> recent, int t,
                           const PolicyBackend& backend, const GenParams& params);

struct VerifierVerdict {
  bool exit = false;
  std::optional<Completion> completion;
  std::optional<std::string> warning;
};

/// First token 1/yes => exit, 0/no => continue, anything else => continue
/// with a warning. Case-insensitive; surrounding punctuation is ignored.
VerifierVerdict parse_verdict(std::string_view text);

VerifierVerdict verify_early_exit(std::span<const Step> trajectory, const TaskSpec& task,
                                  const PolicyBackend& backend, std::string_view instruction,
                                  const GenParams& params);

/// ReAct loop over one embodied task. Backend errors from the agent end the
/// episode with exit_reason=backend_error.
EpisodeRecord run_episode(const EmbodiedTask& task, Environment& env, const ModuleWiring& wiring,
                          const EpisodeOptions& options, std::uint64_t seed);

}  // namespace ah
