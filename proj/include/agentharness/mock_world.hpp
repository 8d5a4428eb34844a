// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "agentharness/core.hpp"
#include "agentharness/tool_schema.hpp"

namespace ah {

/// World state is a Value map keyed by tool family ("vehicle", "trading",
/// "filesystem", "travel"). Families absent from the map are at defaults.
using MockWorld = Value;

struct ToolOutcome {
  bool ok = true;
  std::string payload;
};

struct BuiltinTool {
  std::string_view family;  // "" for pure functions
  bool mutates = false;
  std::function<ToolOutcome(const ToolCall&, MockWorld&)> run;
};

/// Executable implementation for `name`, or nullptr (schema-only tool).
const BuiltinTool* find_builtin(std::string_view name);

/// True when the call cannot change world state (pure or read-only).
bool is_read_only_tool(std::string_view name);

/// Default store for a family, as the tools see it before any mutation.
Value default_family_state(std::string_view family);

struct ExecutionBatch {
  std::vector<ExecutionResult> results;
  MockWorld world;
};

/// Sequential execution; each call sees the state left by the previous one.
/// Unknown or invalid calls yield error results and never abort the batch.
ExecutionBatch execute_calls(std::span<const ToolCall> calls, std::span<const ToolSpec> tools,
                             MockWorld world);

/// Golden calls of one turn, executed batch by batch from `world`.
ExecutionBatch execute_golden(const std::vector<std::string>& golden_batches,
                              std::span<const ToolSpec> tools, MockWorld world);

/// State equality plus: every golden read-only call is matched (order-free,
/// multiset) by an executed OK call with equal arguments.
bool judge_turn(const MockWorld& executed_world, const MockWorld& golden_world,
                std::span<const ExecutionResult> executed, std::span<const ToolCall> golden_calls);

/// Text fed back to the agent for one result.
std::string render_result(const ExecutionResult& result);

}  // namespace ah
