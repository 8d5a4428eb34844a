// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "agentharness/value.hpp"

namespace ah {

enum class TaskKind { embodied, toolcall };

struct TaskSpec {
  std::string id;
  TaskKind kind = TaskKind::embodied;
  std::string instruction;  // task-level context shown to the agent
  std::string goal;
  std::string exemplar;     // in-context example
  std::string env_name;     // embodied only
  int step_limit = 30;
};

/// One ReAct turn: thought, action and the observation it produced.
struct Step {
  int index = 0;  // 1-based
  std::string thought;
  std::string action;
  std::string observation;

  friend bool operator==(const Step&, const Step&) = default;
};

using Trajectory = std::vector<Step>;

/// JSON-schema-like description of one parameter (BFCL flavour).
struct PropertySchema {
  std::string type = "any";
  std::string description;
  std::optional<Value::List> enum_values;
  std::shared_ptr<const PropertySchema> items;  // array element schema
  std::vector<std::pair<std::string, PropertySchema>> properties;  // nested dict
  std::vector<std::string> required;
  std::optional<Value> default_value;
};

struct ToolSpec {
  std::string name;  // dotted names are opaque identifiers
  std::string description;
  std::vector<std::pair<std::string, PropertySchema>> properties;
  std::vector<std::string> required;

  const PropertySchema* property(std::string_view name) const;
};

struct ToolCall {
  std::string function;
  Value::Map arguments;

  const Value* argument(std::string_view name) const;
  friend bool operator==(const ToolCall& a, const ToolCall& b) {
    return a.function == b.function && maps_equal(a.arguments, b.arguments);
  }
};

enum class Outcome { ok, error };

struct ExecutionResult {
  ToolCall call;
  Outcome outcome = Outcome::ok;
  std::string payload;
};

struct UserTurn {
  std::string message;
  /// Golden call batches in bracketed tool-call syntax, one string per batch.
  std::vector<std::string> golden_calls;
};

enum class VerdictCategory {
  ok,
  parse_error,
  wrong_function,
  missing_parameter,
  unexpected_parameter,
  value_error,
  call_count_error,
};

std::string_view to_string(VerdictCategory c) noexcept;
std::optional<VerdictCategory> parse_verdict_category(std::string_view s) noexcept;

struct ValidationVerdict {
  VerdictCategory category = VerdictCategory::ok;
  std::string detail;

  friend bool operator==(const ValidationVerdict&, const ValidationVerdict&) = default;
};

enum class ExitReason { goal, step_limit, early_exit, backend_error };

std::string_view to_string(ExitReason r) noexcept;
std::optional<ExitReason> parse_exit_reason(std::string_view s) noexcept;
std::string_view to_string(TaskKind k) noexcept;
std::optional<TaskKind> parse_task_kind(std::string_view s) noexcept;

/// What happened to one model output inside a tool-calling turn.
struct BatchTranscript {
  std::string raw;         // agent output as generated
  std::string edit;        // "", "unchanged", "no_valid_tool_calls" or "repaired"
  std::string executed;    // canonical text of the calls that ran ("" if none)
  std::vector<std::string> selected_tools;  // empty when no selector ran
  std::vector<ValidationVerdict> verdicts;
  std::vector<std::string> results;         // "ok: ..." / "error: ..."

  friend bool operator==(const BatchTranscript&, const BatchTranscript&) = default;
};

struct TurnTranscript {
  std::string message;
  std::vector<BatchTranscript> batches;
  bool correct = false;

  friend bool operator==(const TurnTranscript&, const TurnTranscript&) = default;
};

struct EpisodeRecord {
  std::string task_id;
  std::string suite;
  std::string group;  // ablation cell label
  TaskKind kind = TaskKind::embodied;
  std::uint64_t seed = 42;
  Trajectory steps;
  std::vector<double> progress_trace;  // progress after each step
  std::vector<TurnTranscript> turns;
  bool success = false;
  double progress = 0.0;
  std::int64_t generated_tokens = 0;
  double wall_seconds = 0.0;
  std::map<std::string, std::string> module_config;
  ExitReason exit_reason = ExitReason::step_limit;
  std::optional<int> early_exit_step;      // first verifier exit
  std::optional<double> progress_at_exit;
  std::vector<std::string> warnings;

  friend bool operator==(const EpisodeRecord&, const EpisodeRecord&) = default;
};

/// Every invariant violation in `record`; empty iff well-formed.
std::vector<std::string> validate_record(const EpisodeRecord& record);

/// Invariant checks for task specs (step_limit, env_name).
std::vector<std::string> validate_task(const TaskSpec& task);

}  // namespace ah
