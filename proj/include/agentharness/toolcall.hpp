// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "agentharness/core.hpp"

namespace ah {

/// Raised when text does not follow the bracketed call grammar.
class ToolCallSyntaxError : public std::runtime_error {
 public:
  ToolCallSyntaxError(std::size_t position, const std::string& message);
  std::size_t position() const noexcept { return position_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t position_;
  std::string reason_;
};

/// Parses `[f(a=1, b="x"), g.h()]`.
///
///   calls := '[' (call (',' call)*)? ']'
///   call  := dotted_ident '(' (ident '=' value (',' ident '=' value)*)? ')'
///   value := string | number | True|False|None | true|false|null
///          | '[' (value (',' value)*)? ']' | '{' (string ':' value (',' ...)*)? '}'
///
/// Strings take single or double quotes. Numbers without '.', 'e' or 'E' are
/// integers. Whitespace is allowed between tokens; anything after the closing
/// bracket other than whitespace is an error.
std::vector<ToolCall> parse_tool_calls(std::string_view text);

/// Non-throwing variant; nullopt on any syntax error.
std::optional<std::vector<ToolCall>> try_parse_tool_calls(std::string_view text);

/// Comma-separated call lists, `[a()], [b(), c()]`, one entry per list.
std::vector<std::vector<ToolCall>> parse_batch_sequence(std::string_view text);

/// Parses a single value literal (the `value` production), whole input.
Value parse_value_literal(std::string_view text);

/// Canonical form: double-quoted strings, True/False/None, ", " separators.
std::string render_tool_calls(const std::vector<ToolCall>& calls);
std::string render_tool_call(const ToolCall& call);
std::string render_value(const Value& value);

}  // namespace ah
