// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "agentharness/core.hpp"
#include "agentharness/policy.hpp"

namespace ah {

/// Bumped whenever any template below changes; recorded in module_config.
inline constexpr std::string_view kPromptVersion = "v1";

/// Default for the configurable early-exit instruction slot.
std::string_view default_early_exit_instruction();

/// Task instruction and in-context example used when a task gives none.
/// Unknown environments get "".
std::string_view default_task_instruction(std::string_view env_name);
std::string_view default_exemplar(std::string_view env_name);

/// "Thought: q\nAction: a\nObservation: o" per step, blank line between.
std::string render_steps(std::span<const Step> steps);

/// What the agent sees of its past: either the whole trajectory or, when a
/// memory module is wired, the memory text plus the latest steps.
struct HistoryView {
  std::optional<std::string> memory;  // nullopt: no memory module
  std::span<const Step> steps;
};

std::string render_history(const HistoryView& view);

/// ReAct prompt: system + one user block.
std::vector<ChatMessage> build_react_prompt(const TaskSpec& task, const std::string& init_observation,
                                            const HistoryView& history,
                                            std::span<const std::string> valid_actions);

/// Memory updater prompt; `previous` empty renders as "(empty)".
std::vector<ChatMessage> build_memory_prompt(const std::string& previous, std::span<const Step> recent);

std::vector<ChatMessage> build_early_exit_prompt(const TaskSpec& task, std::span<const Step> trajectory,
                                                 std::string_view instruction);

/// Tool-calling system prompt over the (possibly reduced) tool list.
std::string build_tool_system_prompt(std::span<const ToolSpec> tools);

/// Function descriptions exactly as embedded in the system prompt.
std::string render_function_descriptions(std::span<const ToolSpec> tools);

struct SelectorContext {
  std::string user_message;
  std::string previous_call;     // "" before the first batch of a turn
  std::string previous_results;  // ""
};

std::vector<ChatMessage> build_selector_prompt(std::span<const ToolSpec> tools, const SelectorContext& ctx);

std::vector<ChatMessage> build_editor_prompt(std::string_view model_response);

/// Recovers the raw model response embedded in an editor prompt (used by the
/// offline rule editor); nullopt if `prompt_text` is not an editor prompt.
std::optional<std::string> extract_editor_input(std::string_view prompt_text);

/// Recovers the function names and user message from a selector prompt.
struct SelectorPromptParts {
  std::vector<std::string> names;
  std::vector<std::string> descriptions;
  std::string user_message;
};
std::optional<SelectorPromptParts> extract_selector_input(std::string_view prompt_text);

}  // namespace ah
