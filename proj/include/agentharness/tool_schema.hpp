// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "agentharness/core.hpp"
#include "agentharness/policy.hpp"

namespace ah {

enum class RelevanceExpectation { call_required, no_call_required, not_applicable };

std::string_view to_string(RelevanceExpectation r) noexcept;
std::optional<RelevanceExpectation> parse_relevance(std::string_view s) noexcept;

/// The seventeen BFCL-v3 category labels a suite may carry.
std::span<const std::string_view> tool_categories() noexcept;
bool is_known_category(std::string_view category) noexcept;
/// Categories whose batches must contain exactly the golden number of calls.
bool is_parallel_category(std::string_view category) noexcept;

struct ToolSuite {
  std::string id;
  std::string category;
  std::vector<ToolSpec> tools;
  std::vector<UserTurn> turns;
  RelevanceExpectation relevance_expected = RelevanceExpectation::not_applicable;
  Value initial_world = Value::map();
  /// Optional per-role scripts ("agent", "selector", "editor").
  std::map<std::string, PolicyScript> scripts;

  const ToolSpec* find_tool(std::string_view name) const;
};

/// Type/enum check of one value; nullopt when it conforms.
/// `float`/`number` accept integer literals (widening).
std::optional<std::string> check_value(const Value& value, const PropertySchema& schema,
                                       const std::string& path);

/// AST-style check of one call against the available tools.
ValidationVerdict validate_call(const ToolCall& call, std::span<const ToolSpec> tools);

/// Per-call verdicts plus a CALL_COUNT_ERROR verdict when `expected_count`
/// is set and differs from the batch size.
std::vector<ValidationVerdict> validate_batch(std::span<const ToolCall> calls,
                                              std::span<const ToolSpec> tools,
                                              std::optional<std::size_t> expected_count);

/// Structural problems with a suite (schema, category, golden calls).
std::vector<std::string> validate_suite(const ToolSuite& suite);

}  // namespace ah
