// SPDX-License-Identifier: Apache-2.0
#include "agentharness/tool_modules.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "agentharness/embodied.hpp"
#include "agentharness/toolcall.hpp"

namespace ah {

namespace {

// "- name", "* name", "1. name", "2) name", "`name`", "name," -> "name"
std::string clean_selector_token(std::string_view raw) {
  auto s = trim(raw);
  if (s.starts_with("- ") || s.starts_with("* ") || s.starts_with("• ")) s = trim(std::string_view(s).substr(s.find(' ')));
  std::size_t digits = 0;
  while (digits < s.size() && std::isdigit(static_cast<unsigned char>(s[digits]))) ++digits;
  if (digits > 0 && digits < s.size() && (s[digits] == '.' || s[digits] == ')'))
    s = trim(std::string_view(s).substr(digits + 1));
  auto strip = [](std::string& t, char c) {
    while (!t.empty() && t.front() == c) t.erase(t.begin());
    while (!t.empty() && t.back() == c) t.pop_back();
  };
  for (char c : {'`', '"', '\'', ',', ';'}) strip(s, c);
  return trim(s);
}

}  // namespace

ToolSelection parse_selector_output(std::string_view text, std::span<const ToolSpec> tools) {
  ToolSelection out;
  std::set<std::string> seen;
  std::size_t pos = 0;
  while (pos <= text.size() && out.names.size() < kSelectorMax) {
    auto eol = text.find('\n', pos);
    auto line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    std::size_t cpos = 0;
    while (cpos <= line.size() && out.names.size() < kSelectorMax) {
      auto comma = line.find(',', cpos);
      auto name = clean_selector_token(line.substr(cpos, comma == std::string_view::npos ? std::string_view::npos : comma - cpos));
      auto it = std::find_if(tools.begin(), tools.end(), [&](const ToolSpec& t) { return t.name == name; });
      if (!name.empty() && it != tools.end() && seen.insert(name).second) {
        out.names.push_back(name);
        out.tools.push_back(*it);
      }
      if (comma == std::string_view::npos) break;
      cpos = comma + 1;
    }
    if (eol == std::string_view::npos) break;
    pos = eol + 1;
  }
  if (out.names.size() < std::min(kSelectorMin, tools.size())) {
    out.fallback = true;
    out.tools.assign(tools.begin(), tools.end());
    out.names.clear();
    for (const auto& t : tools) out.names.push_back(t.name);
  }
  return out;
}

ToolSelection select_tools(const SelectorContext& ctx, std::span<const ToolSpec> tools,
                           const PolicyBackend& backend, const GenParams& params) {
  if (tools.empty()) throw std::invalid_argument("select_tools: tool list is empty");
  Completion c;
  try {
    c = backend.complete(build_selector_prompt(tools, ctx), params);
  } catch (const BackendError& e) {
    auto out = parse_selector_output("", tools);
    out.warning = std::string("selector backend failed (") + e.what() + "); using all tools";
    return out;
  }
  auto out = parse_selector_output(c.text, tools);
  if (out.fallback) out.warning = "selector returned too few valid names; using all tools";
  out.completion = std::move(c);
  return out;
}

std::string_view to_string(EditKind k) noexcept {
  switch (k) {
    case EditKind::unchanged: return "unchanged";
    case EditKind::no_valid_tool_calls: return "no_valid_tool_calls";
    case EditKind::repaired: return "repaired";
  }
  return "unchanged";
}

EditOutcome interpret_editor_reply(std::string_view reply) {
  EditOutcome out;
  const auto t = trim(reply);
  if (t == kUnchanged) {
    out.kind = EditKind::unchanged;
  } else if (t == kNoValidToolCalls) {
    out.kind = EditKind::no_valid_tool_calls;
  } else {
    out.kind = EditKind::repaired;
    out.text = t;
  }
  return out;
}

EditOutcome edit_tool_call(std::string_view raw, const PolicyBackend& backend, const GenParams& params) {
  Completion c;
  try {
    c = backend.complete(build_editor_prompt(raw), params);
  } catch (const BackendError& e) {
    EditOutcome out;
    out.warning = std::string("editor backend failed (") + e.what() + "); keeping the original output";
    return out;
  }
  auto out = interpret_editor_reply(c.text);
  out.completion = std::move(c);
  return out;
}

bool classify_relevance(RelevanceExpectation expected, std::string_view output) {
  const auto calls = try_parse_tool_calls(trim(output));
  const bool has_calls = calls && !calls->empty();
  switch (expected) {
    case RelevanceExpectation::no_call_required: return !has_calls;
    case RelevanceExpectation::call_required: return has_calls;
    case RelevanceExpectation::not_applicable: break;
  }
  throw std::invalid_argument("classify_relevance: suite has no relevance expectation");
}

}  // namespace ah
