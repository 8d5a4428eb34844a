// SPDX-License-Identifier: Apache-2.0
#include "agentharness/core.hpp"

#include <array>
#include <cmath>

namespace ah {

const PropertySchema* ToolSpec::property(std::string_view name) const {
  for (const auto& [key, schema] : properties)
    if (key == name) return &schema;
  return nullptr;
}

const Value* ToolCall::argument(std::string_view name) const {
  for (const auto& [key, value] : arguments)
    if (key == name) return &value;
  return nullptr;
}

namespace {

constexpr std::array<std::pair<VerdictCategory, std::string_view>, 7> kVerdictNames{{
    {VerdictCategory::ok, "OK"},
    {VerdictCategory::parse_error, "PARSE_ERROR"},
    {VerdictCategory::wrong_function, "WRONG_FUNCTION"},
    {VerdictCategory::missing_parameter, "MISSING_PARAMETER"},
    {VerdictCategory::unexpected_parameter, "UNEXPECTED_PARAMETER"},
    {VerdictCategory::value_error, "VALUE_ERROR"},
    {VerdictCategory::call_count_error, "CALL_COUNT_ERROR"},
}};

constexpr std::array<std::pair<ExitReason, std::string_view>, 4> kExitNames{{
    {ExitReason::goal, "goal"},
    {ExitReason::step_limit, "step_limit"},
    {ExitReason::early_exit, "early_exit"},
    {ExitReason::backend_error, "backend_error"},
}};

}  // namespace

std::string_view to_string(VerdictCategory c) noexcept {
  for (const auto& [cat, name] : kVerdictNames)
    if (cat == c) return name;
  return "OK";
}

std::optional<VerdictCategory> parse_verdict_category(std::string_view s) noexcept {
  for (const auto& [cat, name] : kVerdictNames)
    if (name == s) return cat;
  return std::nullopt;
}

std::string_view to_string(ExitReason r) noexcept {
  for (const auto& [reason, name] : kExitNames)
    if (reason == r) return name;
  return "step_limit";
}

std::optional<ExitReason> parse_exit_reason(std::string_view s) noexcept {
  for (const auto& [reason, name] : kExitNames)
    if (name == s) return reason;
  return std::nullopt;
}

std::string_view to_string(TaskKind k) noexcept {
  return k == TaskKind::embodied ? "embodied" : "toolcall";
}

std::optional<TaskKind> parse_task_kind(std::string_view s) noexcept {
  if (s == "embodied") return TaskKind::embodied;
  if (s == "toolcall") return TaskKind::toolcall;
  return std::nullopt;
}

std::vector<std::string> validate_record(const EpisodeRecord& record) {
  std::vector<std::string> out;
  if (!std::isfinite(record.progress) || record.progress < 0.0 || record.progress > 1.0)
    out.emplace_back("progress outside [0,1]");
  if (record.success && record.progress != 1.0)
    out.emplace_back("success requires progress=1.0");
  for (std::size_t i = 0; i < record.steps.size(); ++i) {
    if (record.steps[i].index != static_cast<int>(i) + 1) {
      out.emplace_back("non-contiguous steps");
      break;
    }
  }
  for (const auto& step : record.steps) {
    if (step.action.empty()) {
      out.emplace_back("empty action at step " + std::to_string(step.index));
      break;
    }
  }
  if (!record.progress_trace.empty() && record.progress_trace.size() != record.steps.size())
    out.emplace_back("progress trace length differs from step count");
  for (std::size_t i = 1; i < record.progress_trace.size(); ++i) {
    if (record.progress_trace[i] < record.progress_trace[i - 1]) {
      out.emplace_back("progress decreased within episode");
      break;
    }
  }
  if (record.generated_tokens < 0) out.emplace_back("negative token count");
  if (!(record.wall_seconds >= 0.0)) out.emplace_back("negative wall time");
  if (record.exit_reason == ExitReason::early_exit && !record.early_exit_step)
    out.emplace_back("early_exit without exit step");
  if (record.early_exit_step &&
      (*record.early_exit_step < 1 ||
       (!record.steps.empty() && *record.early_exit_step > static_cast<int>(record.steps.size()))))
    out.emplace_back("early exit step outside trajectory");
  return out;
}

std::vector<std::string> validate_task(const TaskSpec& task) {
  std::vector<std::string> out;
  if (task.id.empty()) out.emplace_back("task id is empty");
  if (task.step_limit < 1) out.emplace_back("step_limit must be >= 1");
  if (task.kind == TaskKind::embodied && task.env_name.empty())
    out.emplace_back("embodied task requires env_name");
  return out;
}

}  // namespace ah
