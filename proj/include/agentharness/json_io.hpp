// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

#include "agentharness/core.hpp"
#include "agentharness/policy.hpp"
#include "json.hpp"

namespace ah {

using Json = nlohmann::ordered_json;

/// Structural problem in an input document; `path()` is a JSON-pointer-ish
/// location such as "tasks[2].subgoals[0].kind".
class FormatError : public std::runtime_error {
 public:
  FormatError(std::string path, const std::string& message)
      : std::runtime_error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

Json to_json(const Value& v);
/// Rejects non-finite numbers.
Value value_from_json(const Json& j, const std::string& path = "");

Json to_json(const PropertySchema& s);
PropertySchema schema_from_json(const Json& j, const std::string& path);

/// BFCL layout: {"name", "description", "parameters": {"type": "dict", ...}}.
Json to_json(const ToolSpec& t);
ToolSpec tool_from_json(const Json& j, const std::string& path);

Json to_json(const ToolCall& c);
ToolCall call_from_json(const Json& j, const std::string& path);

Json to_json(const TaskSpec& t);
TaskSpec task_from_json(const Json& j, const std::string& path);

Json to_json(const PolicyScript& s);
PolicyScript script_from_json(const Json& j, const std::string& path);

Json to_json(const EpisodeRecord& r);
EpisodeRecord record_from_json(const Json& j);

/// One compact line, no trailing newline.
std::string to_jsonl_line(const EpisodeRecord& r);

// Small typed accessors that throw FormatError with the offending path.
const Json& require(const Json& obj, const char* key, const std::string& path);
std::string get_string(const Json& obj, const char* key, const std::string& path,
                       const std::string& fallback);
std::string require_string(const Json& obj, const char* key, const std::string& path);
std::int64_t get_int(const Json& obj, const char* key, const std::string& path, std::int64_t fallback);
double get_number(const Json& obj, const char* key, const std::string& path, double fallback);
bool get_bool(const Json& obj, const char* key, const std::string& path, bool fallback);
std::vector<std::string> get_strings(const Json& obj, const char* key, const std::string& path);
/// Throws if `obj` has a key outside `allowed`.
void reject_unknown_keys(const Json& obj, std::initializer_list<std::string_view> allowed,
                         const std::string& path);
std::string join_path(const std::string& base, std::string_view key);
std::string index_path(const std::string& base, std::size_t i);

/// Reads a whole file; throws std::runtime_error naming the path.
std::string read_text_file(const std::string& path);
Json read_json_file(const std::string& path);

}  // namespace ah
