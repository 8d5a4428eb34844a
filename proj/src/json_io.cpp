// SPDX-License-Identifier: Apache-2.0
#include "agentharness/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>

namespace ah {

std::string join_path(const std::string& base, std::string_view key) {
  return base.empty() ? std::string(key) : base + "." + std::string(key);
}

std::string index_path(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

const Json& require(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw FormatError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw FormatError(join_path(path, key), "missing required key");
  return *it;
}

std::string require_string(const Json& obj, const char* key, const std::string& path) {
  const auto& v = require(obj, key, path);
  if (!v.is_string()) throw FormatError(join_path(path, key), "expected a string");
  return v.get<std::string>();
}

std::string get_string(const Json& obj, const char* key, const std::string& path,
                       const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  return require_string(obj, key, path);
}

std::int64_t get_int(const Json& obj, const char* key, const std::string& path, std::int64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) throw FormatError(join_path(path, key), "expected an integer");
  return v.get<std::int64_t>();
}

double get_number(const Json& obj, const char* key, const std::string& path, double fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) throw FormatError(join_path(path, key), "expected a number");
  return v.get<double>();
}

bool get_bool(const Json& obj, const char* key, const std::string& path, bool fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_boolean()) throw FormatError(join_path(path, key), "expected a boolean");
  return v.get<bool>();
}

std::vector<std::string> get_strings(const Json& obj, const char* key, const std::string& path) {
  std::vector<std::string> out;
  if (!obj.contains(key)) return out;
  const auto& v = obj.at(key);
  const auto here = join_path(path, key);
  if (!v.is_array()) throw FormatError(here, "expected an array of strings");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_string()) throw FormatError(index_path(here, i), "expected a string");
    out.push_back(v[i].get<std::string>());
  }
  return out;
}

void reject_unknown_keys(const Json& obj, std::initializer_list<std::string_view> allowed,
                         const std::string& path) {
  if (!obj.is_object()) throw FormatError(path, "expected an object");
  for (const auto& [key, unused] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw FormatError(join_path(path, key), "unknown key '" + key + "'");
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Json read_json_file(const std::string& path) {
  const auto text = read_text_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw FormatError(path, std::string("invalid JSON: ") + e.what());
  }
}

// ---- Value -----------------------------------------------------------------

Json to_json(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::null: return nullptr;
    case Value::Kind::boolean: return v.as_bool();
    case Value::Kind::integer: return v.as_int();
    case Value::Kind::floating: return v.as_number();
    case Value::Kind::string: return v.as_string();
    case Value::Kind::list: {
      Json out = Json::array();
      for (const auto& item : v.as_list()) out.push_back(to_json(item));
      return out;
    }
    case Value::Kind::map: {
      Json out = Json::object();
      for (const auto& [key, item] : v.as_map()) out[key] = to_json(item);
      return out;
    }
  }
  return nullptr;
}

Value value_from_json(const Json& j, const std::string& path) {
  switch (j.type()) {
    case Json::value_t::null: return nullptr;
    case Json::value_t::boolean: return j.get<bool>();
    case Json::value_t::number_integer: return j.get<std::int64_t>();
    case Json::value_t::number_unsigned: {
      auto u = j.get<std::uint64_t>();
      if (u > static_cast<std::uint64_t>(INT64_MAX)) throw FormatError(path, "integer out of range");
      return static_cast<std::int64_t>(u);
    }
    case Json::value_t::number_float: {
      double d = j.get<double>();
      if (!std::isfinite(d)) throw FormatError(path, "non-finite number");
      return d;
    }
    case Json::value_t::string: return j.get<std::string>();
    case Json::value_t::array: {
      Value::List out;
      for (std::size_t i = 0; i < j.size(); ++i) out.push_back(value_from_json(j[i], index_path(path, i)));
      return Value(std::move(out));
    }
    case Json::value_t::object: {
      Value::Map out;
      for (const auto& [key, item] : j.items()) out.emplace_back(key, value_from_json(item, join_path(path, key)));
      return Value(std::move(out));
    }
    default: throw FormatError(path, "unsupported JSON value");
  }
}

// ---- schemas ---------------------------------------------------------------

namespace {

Json properties_to_json(const std::vector<std::pair<std::string, PropertySchema>>& props) {
  Json out = Json::object();
  for (const auto& [name, schema] : props) out[name] = to_json(schema);
  return out;
}

std::vector<std::pair<std::string, PropertySchema>> properties_from_json(const Json& j,
                                                                         const std::string& path) {
  if (!j.is_object()) throw FormatError(path, "expected an object of properties");
  std::vector<std::pair<std::string, PropertySchema>> out;
  for (const auto& [name, item] : j.items()) out.emplace_back(name, schema_from_json(item, join_path(path, name)));
  return out;
}

}  // namespace

Json to_json(const PropertySchema& s) {
  Json out = Json::object();
  out["type"] = s.type;
  if (!s.description.empty()) out["description"] = s.description;
  if (s.enum_values) out["enum"] = to_json(Value(*s.enum_values));
  if (s.items) out["items"] = to_json(*s.items);
  if (!s.properties.empty()) out["properties"] = properties_to_json(s.properties);
  if (!s.required.empty()) out["required"] = s.required;
  if (s.default_value) out["default"] = to_json(*s.default_value);
  return out;
}

PropertySchema schema_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) throw FormatError(path, "expected a property schema object");
  PropertySchema s;
  s.type = get_string(j, "type", path, "any");
  s.description = get_string(j, "description", path, "");
  if (j.contains("enum")) {
    const auto here = join_path(path, "enum");
    if (!j["enum"].is_array()) throw FormatError(here, "expected an array");
    s.enum_values = value_from_json(j["enum"], here).as_list();
  }
  if (j.contains("items")) s.items = std::make_shared<PropertySchema>(schema_from_json(j["items"], join_path(path, "items")));
  if (j.contains("properties")) s.properties = properties_from_json(j["properties"], join_path(path, "properties"));
  s.required = get_strings(j, "required", path);
  if (j.contains("default")) s.default_value = value_from_json(j["default"], join_path(path, "default"));
  return s;
}

Json to_json(const ToolSpec& t) {
  Json params = Json::object();
  params["type"] = "dict";
  params["properties"] = properties_to_json(t.properties);
  params["required"] = t.required;
  return Json{{"name", t.name}, {"description", t.description}, {"parameters", params}};
}

ToolSpec tool_from_json(const Json& j, const std::string& path) {
  ToolSpec t;
  t.name = require_string(j, "name", path);
  t.description = get_string(j, "description", path, "");
  if (j.contains("parameters")) {
    const auto here = join_path(path, "parameters");
    const auto& params = j["parameters"];
    if (!params.is_object()) throw FormatError(here, "expected an object");
    if (params.contains("properties"))
      t.properties = properties_from_json(params["properties"], join_path(here, "properties"));
    t.required = get_strings(params, "required", here);
  }
  return t;
}

Json to_json(const ToolCall& c) {
  return Json{{"function", c.function}, {"arguments", to_json(Value(c.arguments))}};
}

ToolCall call_from_json(const Json& j, const std::string& path) {
  ToolCall c;
  c.function = require_string(j, "function", path);
  if (j.contains("arguments")) {
    auto args = value_from_json(j["arguments"], join_path(path, "arguments"));
    if (!args.is_map()) throw FormatError(join_path(path, "arguments"), "expected an object");
    c.arguments = args.as_map();
  }
  return c;
}

Json to_json(const TaskSpec& t) {
  return Json{{"id", t.id},
              {"kind", std::string(to_string(t.kind))},
              {"instruction", t.instruction},
              {"goal", t.goal},
              {"exemplar", t.exemplar},
              {"env_name", t.env_name},
              {"step_limit", t.step_limit}};
}

TaskSpec task_from_json(const Json& j, const std::string& path) {
  TaskSpec t;
  t.id = require_string(j, "id", path);
  auto kind = get_string(j, "kind", path, "embodied");
  auto parsed = parse_task_kind(kind);
  if (!parsed) throw FormatError(join_path(path, "kind"), "unknown task kind '" + kind + "'");
  t.kind = *parsed;
  t.instruction = get_string(j, "instruction", path, "");
  t.goal = get_string(j, "goal", path, "");
  t.exemplar = get_string(j, "exemplar", path, "");
  t.env_name = get_string(j, "env_name", path, "");
  t.step_limit = static_cast<int>(get_int(j, "step_limit", path, 30));
  return t;
}

Json to_json(const PolicyScript& s) {
  Json rules = Json::array();
  for (const auto& r : s.rules) {
    Json rule{{r.regex ? "regex" : "match", r.pattern}, {"response", r.response}};
    rules.push_back(rule);
  }
  return Json{{"rules", rules}, {"default", s.default_response}, {"tokens_per_second", s.tokens_per_second}};
}

PolicyScript script_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) throw FormatError(path, "expected a script object");
  reject_unknown_keys(j, {"rules", "default", "replay", "tokens_per_second"}, path);
  PolicyScript s;
  if (j.contains("replay")) {
    auto responses = get_strings(j, "replay", path);
    try {
      s = PolicyScript::replay(responses);
    } catch (const std::invalid_argument& e) {
      throw FormatError(join_path(path, "replay"), e.what());
    }
  }
  if (j.contains("rules")) {
    const auto here = join_path(path, "rules");
    const auto& rules = j["rules"];
    if (!rules.is_array()) throw FormatError(here, "expected an array");
    for (std::size_t i = 0; i < rules.size(); ++i) {
      const auto rp = index_path(here, i);
      reject_unknown_keys(rules[i], {"match", "regex", "response"}, rp);
      ScriptRule r;
      if (rules[i].contains("regex")) {
        r.pattern = require_string(rules[i], "regex", rp);
        r.regex = true;
        try {
          std::regex check(r.pattern, std::regex::ECMAScript);
        } catch (const std::regex_error& e) {
          throw FormatError(join_path(rp, "regex"), std::string("invalid regex: ") + e.what());
        }
      } else {
        r.pattern = require_string(rules[i], "match", rp);
      }
      r.response = require_string(rules[i], "response", rp);
      s.rules.push_back(std::move(r));
    }
  }
  s.default_response = get_string(j, "default", path, s.default_response);
  s.tokens_per_second = get_number(j, "tokens_per_second", path, s.tokens_per_second);
  if (!(s.tokens_per_second > 0)) throw FormatError(join_path(path, "tokens_per_second"), "must be > 0");
  return s;
}

// ---- episode records -------------------------------------------------------

Json to_json(const EpisodeRecord& r) {
  Json out = Json::object();
  out["task_id"] = r.task_id;
  out["suite"] = r.suite;
  out["group"] = r.group;
  out["kind"] = std::string(to_string(r.kind));
  out["seed"] = r.seed;
  out["success"] = r.success;
  out["progress"] = r.progress;
  out["exit_reason"] = std::string(to_string(r.exit_reason));
  out["generated_tokens"] = r.generated_tokens;
  out["wall_seconds"] = r.wall_seconds;
  Json config = Json::object();
  for (const auto& [k, v] : r.module_config) config[k] = v;
  out["module_config"] = config;
  if (r.early_exit_step) out["early_exit_step"] = *r.early_exit_step;
  if (r.progress_at_exit) out["progress_at_exit"] = *r.progress_at_exit;
  Json steps = Json::array();
  for (const auto& s : r.steps)
    steps.push_back({{"index", s.index}, {"thought", s.thought}, {"action", s.action}, {"observation", s.observation}});
  out["steps"] = steps;
  out["progress_trace"] = r.progress_trace;
  Json turns = Json::array();
  for (const auto& t : r.turns) {
    Json batches = Json::array();
    for (const auto& b : t.batches) {
      Json verdicts = Json::array();
      for (const auto& v : b.verdicts)
        verdicts.push_back({{"category", std::string(to_string(v.category))}, {"detail", v.detail}});
      batches.push_back({{"raw", b.raw},
                         {"edit", b.edit},
                         {"executed", b.executed},
                         {"selected_tools", b.selected_tools},
                         {"verdicts", verdicts},
                         {"results", b.results}});
    }
    turns.push_back({{"message", t.message}, {"correct", t.correct}, {"batches", batches}});
  }
  out["turns"] = turns;
  out["warnings"] = r.warnings;
  return out;
}

EpisodeRecord record_from_json(const Json& j) {
  const std::string path;
  EpisodeRecord r;
  r.task_id = require_string(j, "task_id", path);
  r.suite = get_string(j, "suite", path, "");
  r.group = get_string(j, "group", path, "");
  auto kind = parse_task_kind(get_string(j, "kind", path, "embodied"));
  if (!kind) throw FormatError("kind", "unknown task kind");
  r.kind = *kind;
  const auto& seed = require(j, "seed", path);
  if (!seed.is_number_integer()) throw FormatError("seed", "expected an integer");
  r.seed = seed.get<std::uint64_t>();
  r.success = get_bool(j, "success", path, false);
  r.progress = get_number(j, "progress", path, 0.0);
  auto exit = parse_exit_reason(require_string(j, "exit_reason", path));
  if (!exit) throw FormatError("exit_reason", "unknown exit reason");
  r.exit_reason = *exit;
  r.generated_tokens = get_int(j, "generated_tokens", path, 0);
  r.wall_seconds = get_number(j, "wall_seconds", path, 0.0);
  if (j.contains("module_config")) {
    const auto& mc = j["module_config"];
    if (!mc.is_object()) throw FormatError("module_config", "expected an object");
    for (const auto& [k, v] : mc.items()) {
      if (!v.is_string()) throw FormatError("module_config." + k, "expected a string");
      r.module_config[k] = v.get<std::string>();
    }
  }
  if (j.contains("early_exit_step")) r.early_exit_step = static_cast<int>(get_int(j, "early_exit_step", path, 0));
  if (j.contains("progress_at_exit")) r.progress_at_exit = get_number(j, "progress_at_exit", path, 0.0);
  if (j.contains("steps")) {
    const auto& steps = j["steps"];
    if (!steps.is_array()) throw FormatError("steps", "expected an array");
    for (std::size_t i = 0; i < steps.size(); ++i) {
      const auto sp = index_path("steps", i);
      Step s;
      s.index = static_cast<int>(get_int(steps[i], "index", sp, 0));
      s.thought = get_string(steps[i], "thought", sp, "");
      s.action = get_string(steps[i], "action", sp, "");
      s.observation = get_string(steps[i], "observation", sp, "");
      r.steps.push_back(std::move(s));
    }
  }
  if (j.contains("progress_trace")) {
    const auto& trace = j["progress_trace"];
    if (!trace.is_array()) throw FormatError("progress_trace", "expected an array");
    for (std::size_t i = 0; i < trace.size(); ++i) {
      if (!trace[i].is_number()) throw FormatError(index_path("progress_trace", i), "expected a number");
      r.progress_trace.push_back(trace[i].get<double>());
    }
  }
  if (j.contains("turns")) {
    const auto& turns = j["turns"];
    if (!turns.is_array()) throw FormatError("turns", "expected an array");
    for (std::size_t i = 0; i < turns.size(); ++i) {
      const auto tp = index_path("turns", i);
      TurnTranscript t;
      t.message = get_string(turns[i], "message", tp, "");
      t.correct = get_bool(turns[i], "correct", tp, false);
      if (turns[i].contains("batches")) {
        const auto& batches = turns[i]["batches"];
        if (!batches.is_array()) throw FormatError(join_path(tp, "batches"), "expected an array");
        for (std::size_t b = 0; b < batches.size(); ++b) {
          const auto bp = index_path(join_path(tp, "batches"), b);
          BatchTranscript bt;
          bt.raw = get_string(batches[b], "raw", bp, "");
          bt.edit = get_string(batches[b], "edit", bp, "");
          bt.executed = get_string(batches[b], "executed", bp, "");
          bt.selected_tools = get_strings(batches[b], "selected_tools", bp);
          bt.results = get_strings(batches[b], "results", bp);
          if (batches[b].contains("verdicts")) {
            const auto& verdicts = batches[b]["verdicts"];
            if (!verdicts.is_array()) throw FormatError(join_path(bp, "verdicts"), "expected an array");
            for (std::size_t v = 0; v < verdicts.size(); ++v) {
              const auto vp = index_path(join_path(bp, "verdicts"), v);
              auto cat = parse_verdict_category(require_string(verdicts[v], "category", vp));
              if (!cat) throw FormatError(join_path(vp, "category"), "unknown verdict category");
              bt.verdicts.push_back({*cat, get_string(verdicts[v], "detail", vp, "")});
            }
          }
          t.batches.push_back(std::move(bt));
        }
      }
      r.turns.push_back(std::move(t));
    }
  }
  r.warnings = get_strings(j, "warnings", path);
  return r;
}

std::string to_jsonl_line(const EpisodeRecord& r) {
  return to_json(r).dump(-1, ' ', false, Json::error_handler_t::replace);
}

}  // namespace ah
