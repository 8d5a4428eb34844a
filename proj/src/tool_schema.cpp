// SPDX-License-Identifier: Apache-2.0
#include "agentharness/tool_schema.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>

#include "agentharness/toolcall.hpp"

namespace ah {

namespace {

constexpr std::array<std::string_view, 17> kCategories{
    "simple",
    "java",
    "javascript",
    "multiple",
    "parallel",
    "parallel_multiple",
    "live_simple",
    "live_multiple",
    "live_parallel",
    "live_parallel_multiple",
    "multi_turn_base",
    "multi_turn_miss_func",
    "multi_turn_miss_param",
    "multi_turn_long_context",
    "live_relevance",
    "irrelevance",
    "live_irrelevance",
};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool known_type(const std::string& t) {
  static const std::set<std::string> kTypes{"string", "integer", "int",   "float", "number", "double",
                                            "long",   "boolean", "bool",  "array", "tuple",  "list",
                                            "dict",   "object",  "any",   "char",  "short",  "byte"};
  return kTypes.contains(t);
}

std::vector<std::string> schema_issues(const PropertySchema& schema, const std::string& path) {
  std::vector<std::string> out;
  const auto type = lower(schema.type);
  if (!known_type(type)) out.push_back(path + ": unknown type '" + schema.type + "'");
  for (const auto& r : schema.required) {
    bool found = std::any_of(schema.properties.begin(), schema.properties.end(),
                             [&](const auto& p) { return p.first == r; });
    if (!found) out.push_back(path + ": required '" + r + "' not in properties");
  }
  for (const auto& [name, child] : schema.properties) {
    auto nested = schema_issues(child, path + "." + name);
    out.insert(out.end(), nested.begin(), nested.end());
  }
  if (schema.items) {
    auto nested = schema_issues(*schema.items, path + "[]");
    out.insert(out.end(), nested.begin(), nested.end());
  }
  return out;
}

}  // namespace

std::string_view to_string(RelevanceExpectation r) noexcept {
  switch (r) {
    case RelevanceExpectation::call_required: return "call_required";
    case RelevanceExpectation::no_call_required: return "no_call_required";
    case RelevanceExpectation::not_applicable: return "n/a";
  }
  return "n/a";
}

std::optional<RelevanceExpectation> parse_relevance(std::string_view s) noexcept {
  if (s == "call_required") return RelevanceExpectation::call_required;
  if (s == "no_call_required") return RelevanceExpectation::no_call_required;
  if (s == "n/a" || s.empty()) return RelevanceExpectation::not_applicable;
  return std::nullopt;
}

std::span<const std::string_view> tool_categories() noexcept { return kCategories; }

bool is_known_category(std::string_view category) noexcept {
  return std::find(kCategories.begin(), kCategories.end(), category) != kCategories.end();
}

bool is_parallel_category(std::string_view category) noexcept {
  return category == "parallel" || category == "parallel_multiple" || category == "live_parallel" ||
         category == "live_parallel_multiple";
}

const ToolSpec* ToolSuite::find_tool(std::string_view name) const {
  for (const auto& t : tools)
    if (t.name == name) return &t;
  return nullptr;
}

std::optional<std::string> check_value(const Value& value, const PropertySchema& schema,
                                       const std::string& path) {
  const auto type = lower(schema.type);
  auto mismatch = [&](std::string_view expected) -> std::optional<std::string> {
    return path + ": expected " + std::string(expected) + ", got " + std::string(kind_name(value.kind()));
  };

  if (value.is_null()) {
    if (type == "any") return std::nullopt;
    return mismatch(type);
  }
  if (type == "string" || type == "char") {
    if (!value.is_string()) return mismatch("string");
  } else if (type == "integer" || type == "int" || type == "long" || type == "short" || type == "byte") {
    if (!value.is_int()) return mismatch("integer");
  } else if (type == "float" || type == "number" || type == "double") {
    if (!value.is_number()) return mismatch("float");
  } else if (type == "boolean" || type == "bool") {
    if (!value.is_bool()) return mismatch("boolean");
  } else if (type == "array" || type == "tuple" || type == "list") {
    if (!value.is_list()) return mismatch("array");
    if (schema.items) {
      const auto& items = value.as_list();
      for (std::size_t i = 0; i < items.size(); ++i)
        if (auto err = check_value(items[i], *schema.items, path + "[" + std::to_string(i) + "]"))
          return err;
    }
  } else if (type == "dict" || type == "object") {
    if (!value.is_map()) return mismatch("dict");
    for (const auto& r : schema.required)
      if (value.find(r) == nullptr) return path + ": missing key '" + r + "'";
    if (!schema.properties.empty()) {
      for (const auto& [key, item] : value.as_map()) {
        auto it = std::find_if(schema.properties.begin(), schema.properties.end(),
                               [&](const auto& p) { return p.first == key; });
        if (it == schema.properties.end()) return path + ": unexpected key '" + key + "'";
        if (auto err = check_value(item, it->second, path + "." + key)) return err;
      }
    }
  }
  if (schema.enum_values) {
    const auto& allowed = *schema.enum_values;
    if (std::find(allowed.begin(), allowed.end(), value) == allowed.end())
      return path + ": " + render_value(value) + " not in enum";
  }
  return std::nullopt;
}

ValidationVerdict validate_call(const ToolCall& call, std::span<const ToolSpec> tools) {
  auto tool = std::find_if(tools.begin(), tools.end(), [&](const ToolSpec& t) { return t.name == call.function; });
  if (tool == tools.end())
    return {VerdictCategory::wrong_function, "no function named '" + call.function + "'"};
  for (const auto& r : tool->required)
    if (call.argument(r) == nullptr)
      return {VerdictCategory::missing_parameter, call.function + ": missing required '" + r + "'"};
  for (const auto& [name, value] : call.arguments)
    if (tool->property(name) == nullptr)
      return {VerdictCategory::unexpected_parameter, call.function + ": unexpected parameter '" + name + "'"};
  for (const auto& [name, value] : call.arguments) {
    const auto* schema = tool->property(name);
    const bool required = std::find(tool->required.begin(), tool->required.end(), name) != tool->required.end();
    if (value.is_null() && !required) continue;  // explicit "use the default"
    if (auto err = check_value(value, *schema, call.function + "." + name))
      return {VerdictCategory::value_error, *err};
  }
  return {VerdictCategory::ok, ""};
}

std::vector<ValidationVerdict> validate_batch(std::span<const ToolCall> calls,
                                              std::span<const ToolSpec> tools,
                                              std::optional<std::size_t> expected_count) {
  std::vector<ValidationVerdict> out;
  if (expected_count && *expected_count != calls.size())
    out.push_back({VerdictCategory::call_count_error, "expected " + std::to_string(*expected_count) +
                                                          " calls, got " + std::to_string(calls.size())});
  for (const auto& c : calls) out.push_back(validate_call(c, tools));
  return out;
}

std::vector<std::string> validate_suite(const ToolSuite& suite) {
  std::vector<std::string> out;
  if (!is_known_category(suite.category)) out.push_back("unknown category '" + suite.category + "'");
  std::set<std::string> names;
  for (const auto& tool : suite.tools) {
    if (tool.name.empty()) out.push_back("tool with empty name");
    if (!names.insert(tool.name).second) out.push_back("duplicate tool name '" + tool.name + "'");
    PropertySchema root;
    root.type = "dict";
    root.properties = tool.properties;
    root.required = tool.required;
    auto issues = schema_issues(root, tool.name);
    out.insert(out.end(), issues.begin(), issues.end());
  }
  if (suite.turns.empty()) out.push_back("suite has no turns");
  const bool hallucination = suite.relevance_expected != RelevanceExpectation::not_applicable;
  const bool relevance_category = suite.category.find("relevance") != std::string::npos;
  if (hallucination != relevance_category)
    out.push_back("relevance_expected does not match category '" + suite.category + "'");
  for (std::size_t t = 0; t < suite.turns.size(); ++t) {
    const auto& turn = suite.turns[t];
    if (turn.message.empty()) out.push_back("turn " + std::to_string(t + 1) + ": empty message");
    for (const auto& batch : turn.golden_calls) {
      auto calls = try_parse_tool_calls(batch);
      if (!calls) {
        out.push_back("turn " + std::to_string(t + 1) + ": golden batch does not parse: " + batch);
        continue;
      }
      for (const auto& v : validate_batch(*calls, suite.tools, std::nullopt))
        if (v.category != VerdictCategory::ok)
          out.push_back("turn " + std::to_string(t + 1) + ": golden call invalid: " + v.detail);
    }
  }
  return out;
}

}  // namespace ah
