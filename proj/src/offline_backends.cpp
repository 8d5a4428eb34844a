// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cctype>
#include <set>

#include "agentharness/embodied.hpp"
#include "agentharness/json_io.hpp"
#include "agentharness/tool_modules.hpp"
#include "agentharness/toolcall.hpp"

namespace ah {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.'; }

// Index of the bracket closing the one at `open`, skipping quoted strings.
std::size_t balanced_end(std::string_view text, std::size_t open) {
  std::vector<char> stack;
  char quote = 0;
  for (std::size_t i = open; i < text.size(); ++i) {
    const char c = text[i];
    if (quote) {
      if (c == '\\') ++i;
      else if (c == quote) quote = 0;
      continue;
    }
    switch (c) {
      case '"':
      case '\'': quote = c; break;
      case '(': stack.push_back(')'); break;
      case '[': stack.push_back(']'); break;
      case '{': stack.push_back('}'); break;
      case ')':
      case ']':
      case '}':
        if (stack.empty() || stack.back() != c) return std::string_view::npos;
        stack.pop_back();
        if (stack.empty()) return i;
        break;
      default: break;
    }
  }
  return std::string_view::npos;
}

std::optional<ToolCall> call_from_object(const Json& obj) {
  if (!obj.is_object() || obj.empty()) return std::nullopt;
  if (obj.contains("name") && obj["name"].is_string()) {
    ToolCall c;
    c.function = obj["name"].get<std::string>();
    for (const char* key : {"arguments", "parameters", "args"}) {
      if (!obj.contains(key)) continue;
      const auto* args = &obj[key];
      Json parsed;
      if (args->is_string()) {  // OpenAI-style stringified arguments
        parsed = Json::parse(args->get<std::string>(), nullptr, false);
        args = &parsed;
      }
      if (!args->is_object()) return std::nullopt;
      c.arguments = value_from_json(*args).as_map();
    }
    return c;
  }
  if (obj.size() == 1 && obj.begin().value().is_object()) {
    ToolCall c;
    c.function = obj.begin().key();
    c.arguments = value_from_json(obj.begin().value()).as_map();
    return c;
  }
  return std::nullopt;
}

std::optional<std::vector<ToolCall>> calls_from_json_text(std::string_view text) {
  Json doc = Json::parse(text, nullptr, false);
  if (doc.is_discarded()) return std::nullopt;
  std::vector<ToolCall> out;
  try {
    if (doc.is_array()) {
      for (const auto& item : doc) {
        auto c = call_from_object(item);
        if (!c) return std::nullopt;
        out.push_back(std::move(*c));
      }
    } else if (auto c = call_from_object(doc)) {
      out.push_back(std::move(*c));
    } else if (doc.is_object() && std::all_of(doc.begin(), doc.end(), [](const Json& v) { return v.is_object(); })) {
      for (const auto& [name, args] : doc.items()) out.push_back({name, value_from_json(args).as_map()});
    } else {
      return std::nullopt;
    }
  } catch (const std::exception&) {
    return std::nullopt;  // non-finite numbers and the like
  }
  for (const auto& c : out) {
    if (c.function.empty() || !ident_start(c.function[0]) ||
        !std::all_of(c.function.begin(), c.function.end(), ident_char))
      return std::nullopt;
  }
  if (out.empty()) return std::nullopt;
  return out;
}

std::string strip_code_fence(std::string_view text) {
  auto t = trim(text);
  if (!t.starts_with("```")) return t;
  auto first_nl = t.find('\n');
  auto last = t.rfind("```");
  if (first_nl == std::string::npos || last <= first_nl) return t;
  return trim(std::string_view(t).substr(first_nl + 1, last - first_nl - 1));
}

EditOutcome repaired(const std::vector<ToolCall>& calls) {
  EditOutcome out;
  out.kind = EditKind::repaired;
  out.text = render_tool_calls(calls);
  return out;
}

std::string last_user_content(std::span<const ChatMessage> messages) {
  for (auto it = messages.rbegin(); it != messages.rend(); ++it)
    if (it->role == Role::user) return it->content;
  return "";
}

std::vector<std::string> words(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (cur.size() > 1) out.push_back(cur);
    cur.clear();
  };
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else {
      flush();
    }
  }
  flush();
  return out;
}

}  // namespace

EditOutcome rule_based_repair(std::string_view raw) {
  const auto text = trim(raw);
  if (try_parse_tool_calls(text)) return {};
  const auto unfenced = strip_code_fence(text);
  if (unfenced != text) {
    if (auto calls = try_parse_tool_calls(unfenced)) return repaired(*calls);
  }
  if (!unfenced.empty() && ident_start(unfenced[0])) {
    if (auto calls = try_parse_tool_calls("[" + unfenced + "]"); calls && !calls->empty()) return repaired(*calls);
  }
  if (auto calls = calls_from_json_text(unfenced)) return repaired(*calls);

  // Calls embedded in prose, leftmost first.
  const std::string_view s = unfenced;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '[' || c == '{') {
      const auto end = balanced_end(s, i);
      if (end == std::string_view::npos) continue;
      const auto sub = s.substr(i, end - i + 1);
      if (c == '[') {
        if (auto calls = try_parse_tool_calls(sub); calls && !calls->empty()) return repaired(*calls);
      }
      if (auto calls = calls_from_json_text(sub)) return repaired(*calls);
    } else if (ident_start(c) && (i == 0 || !ident_char(s[i - 1]))) {
      std::size_t j = i;
      while (j < s.size() && ident_char(s[j])) ++j;
      if (j < s.size() && s[j] == '(') {
        const auto end = balanced_end(s, j);
        if (end == std::string_view::npos) continue;
        if (auto calls = try_parse_tool_calls("[" + std::string(s.substr(i, end - i + 1)) + "]"))
          return repaired(*calls);
      }
    }
  }
  EditOutcome out;
  out.kind = EditKind::no_valid_tool_calls;
  return out;
}

Completion RuleEditorBackend::complete(std::span<const ChatMessage> messages, const GenParams&) const {
  if (messages.empty()) throw std::invalid_argument("complete: messages must be nonempty");
  const auto input = extract_editor_input(last_user_content(messages));
  if (!input) return simulated_completion(std::string(kNoValidToolCalls), tps_);
  const auto outcome = rule_based_repair(*input);
  switch (outcome.kind) {
    case EditKind::unchanged: return simulated_completion(std::string(kUnchanged), tps_);
    case EditKind::no_valid_tool_calls: return simulated_completion(std::string(kNoValidToolCalls), tps_);
    case EditKind::repaired: return simulated_completion(outcome.text, tps_);
  }
  return simulated_completion(std::string(kUnchanged), tps_);
}

Completion KeywordSelectorBackend::complete(std::span<const ChatMessage> messages, const GenParams&) const {
  if (messages.empty()) throw std::invalid_argument("complete: messages must be nonempty");
  const auto parts = extract_selector_input(last_user_content(messages));
  if (!parts) return simulated_completion("", tps_);
  const auto query = words(parts->user_message);
  const std::set<std::string> query_set(query.begin(), query.end());
  std::vector<std::pair<int, std::size_t>> scored;
  for (std::size_t i = 0; i < parts->names.size(); ++i) {
    int score = 0;
    for (const auto& w : words(parts->names[i] + " " + parts->descriptions[i]))
      if (query_set.contains(w)) ++score;
    scored.emplace_back(score, i);
  }
  std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  const auto relevant = static_cast<std::size_t>(
      std::count_if(scored.begin(), scored.end(), [](const auto& s) { return s.first > 0; }));
  const std::size_t take = std::min({std::max(relevant, kSelectorMin), kSelectorMax, scored.size()});
  std::string out;
  for (std::size_t k = 0; k < take; ++k) {
    if (k) out += "\n";
    out += parts->names[scored[k].second];
  }
  return simulated_completion(out, tps_);
}

}  // namespace ah
