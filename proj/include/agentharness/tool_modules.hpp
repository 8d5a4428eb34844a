// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "agentharness/policy.hpp"
#include "agentharness/prompts.hpp"
#include "agentharness/tool_schema.hpp"

namespace ah {

// ---- selector --------------------------------------------------------------

inline constexpr std::size_t kSelectorMin = 3;
inline constexpr std::size_t kSelectorMax = 10;

struct ToolSelection {
  std::vector<ToolSpec> tools;
  std::vector<std::string> names;
  bool fallback = false;  // full tool list used
  std::optional<Completion> completion;
  std::optional<std::string> warning;
};

/// Names one per line (bullets, numbering, quotes and commas tolerated),
/// deduplicated, unknown names dropped, clamped to kSelectorMax. Falls back
/// to the full list when fewer than min(kSelectorMin, |D|) names survive.
ToolSelection parse_selector_output(std::string_view text, std::span<const ToolSpec> tools);

/// Backend errors fall back to the full list with a warning.
ToolSelection select_tools(const SelectorContext& ctx, std::span<const ToolSpec> tools,
                           const PolicyBackend& backend, const GenParams& params);

// ---- editor ----------------------------------------------------------------

enum class EditKind { unchanged, no_valid_tool_calls, repaired };

std::string_view to_string(EditKind k) noexcept;

struct EditOutcome {
  EditKind kind = EditKind::unchanged;
  std::string text;  // repaired call text (repaired only)
  std::optional<Completion> completion;
  std::optional<std::string> warning;
};

inline constexpr std::string_view kUnchanged = "UNCHANGED";
inline constexpr std::string_view kNoValidToolCalls = "NO_VALID_TOOL_CALLS";

/// Maps an editor reply onto an outcome (trimmed exact keywords).
EditOutcome interpret_editor_reply(std::string_view reply);

/// Runs the editor module; backend errors yield Unchanged with a warning.
EditOutcome edit_tool_call(std::string_view raw, const PolicyBackend& backend, const GenParams& params);

/// Deterministic repair used by the offline editor backend:
///   valid call list          -> Unchanged
///   bare `f(x=1)`            -> `[f(x=1)]`
///   {"f": {...}} / {"name": "f", "arguments": {...}} (also lists, inside prose)
///                            -> `[f(...)]`
///   prose with an embedded call list or bare call -> that call
///   anything else            -> NoValidToolCalls
EditOutcome rule_based_repair(std::string_view raw);

// ---- relevance -------------------------------------------------------------

/// no_call_required: correct iff the output yields no calls (unparseable or
/// `[]`); call_required: correct iff at least one call parses.
bool classify_relevance(RelevanceExpectation expected, std::string_view output);

// ---- offline module backends -----------------------------------------------

/// Editor backend that answers with rule_based_repair on the embedded input.
class RuleEditorBackend final : public PolicyBackend {
 public:
  explicit RuleEditorBackend(double tokens_per_second = 50.0) : tps_(tokens_per_second) {}
  Completion complete(std::span<const ChatMessage> messages, const GenParams& params) const override;
  std::string describe() const override { return "rule_editor"; }

 private:
  double tps_;
};

/// Selector backend ranking functions by word overlap with the user message
/// (ties keep list order) and emitting the top names one per line.
class KeywordSelectorBackend final : public PolicyBackend {
 public:
  explicit KeywordSelectorBackend(double tokens_per_second = 50.0) : tps_(tokens_per_second) {}
  Completion complete(std::span<const ChatMessage> messages, const GenParams& params) const override;
  std::string describe() const override { return "keyword_selector"; }

 private:
  double tps_;
};

}  // namespace ah
