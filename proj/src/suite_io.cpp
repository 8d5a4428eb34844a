// SPDX-License-Identifier: Apache-2.0
#include "agentharness/suite_io.hpp"

#include <algorithm>
#include <filesystem>
#include <set>

#include "agentharness/prompts.hpp"

namespace ah {

namespace {

std::map<std::string, PolicyScript> scripts_from_json(const Json& j, const std::string& path,
                                                      std::initializer_list<std::string_view> roles) {
  std::map<std::string, PolicyScript> out;
  if (!j.is_object()) throw FormatError(path, "expected an object of role scripts");
  reject_unknown_keys(j, roles, path);
  for (const auto& [role, script] : j.items()) out.emplace(role, script_from_json(script, join_path(path, role)));
  return out;
}

Json scripts_to_json(const std::map<std::string, PolicyScript>& scripts) {
  Json out = Json::object();
  for (const auto& [role, s] : scripts) out[role] = to_json(s);
  return out;
}

}  // namespace

ToolSuite tool_suite_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) throw FormatError(path, "expected a tool instance object");
  reject_unknown_keys(j, {"id", "category", "tools", "turns", "relevance_expected", "initial_world", "scripts"}, path);
  ToolSuite s;
  s.id = require_string(j, "id", path);
  s.category = require_string(j, "category", path);
  const auto& tools = require(j, "tools", path);
  if (!tools.is_array()) throw FormatError(join_path(path, "tools"), "expected an array");
  for (std::size_t i = 0; i < tools.size(); ++i)
    s.tools.push_back(tool_from_json(tools[i], index_path(join_path(path, "tools"), i)));
  const auto& turns = require(j, "turns", path);
  const auto turns_path = join_path(path, "turns");
  if (!turns.is_array()) throw FormatError(turns_path, "expected an array");
  for (std::size_t i = 0; i < turns.size(); ++i) {
    const auto tp = index_path(turns_path, i);
    if (!turns[i].is_object()) throw FormatError(tp, "expected a turn object");
    reject_unknown_keys(turns[i], {"message", "golden_calls"}, tp);
    UserTurn t;
    t.message = require_string(turns[i], "message", tp);
    t.golden_calls = get_strings(turns[i], "golden_calls", tp);
    s.turns.push_back(std::move(t));
  }
  const auto rel = get_string(j, "relevance_expected", path, "n/a");
  const auto parsed = parse_relevance(rel);
  if (!parsed) throw FormatError(join_path(path, "relevance_expected"), "unknown value '" + rel + "'");
  s.relevance_expected = *parsed;
  if (j.contains("initial_world")) {
    s.initial_world = value_from_json(j["initial_world"], join_path(path, "initial_world"));
    if (!s.initial_world.is_map()) throw FormatError(join_path(path, "initial_world"), "expected an object");
  }
  if (j.contains("scripts"))
    s.scripts = scripts_from_json(j["scripts"], join_path(path, "scripts"), {"agent", "selector", "editor"});
  return s;
}

Json to_json(const ToolSuite& s) {
  Json tools = Json::array();
  for (const auto& t : s.tools) tools.push_back(to_json(t));
  Json turns = Json::array();
  for (const auto& t : s.turns) turns.push_back(Json{{"message", t.message}, {"golden_calls", t.golden_calls}});
  Json out{{"id", s.id}, {"category", s.category}, {"tools", tools}, {"turns", turns},
           {"relevance_expected", std::string(to_string(s.relevance_expected))},
           {"initial_world", to_json(s.initial_world)}};
  if (!s.scripts.empty()) out["scripts"] = scripts_to_json(s.scripts);
  return out;
}

ToolSuite load_tool_instance(const std::string& file) { return tool_suite_from_json(read_json_file(file), file); }

EmbodiedSuiteTask embodied_task_from_json(const Json& j, const std::string& path, const std::string& default_env) {
  if (!j.is_object()) throw FormatError(path, "expected a task object");
  reject_unknown_keys(j, {"id", "goal", "instruction", "exemplar", "step_limit", "env", "subgoals", "layout", "scripts"},
                      path);
  EmbodiedSuiteTask out;
  auto& t = out.task;
  t.spec = task_from_json(j, path);
  t.spec.kind = TaskKind::embodied;
  t.spec.env_name = get_string(j, "env", path, default_env);
  if (t.spec.instruction.empty()) t.spec.instruction = default_task_instruction(t.spec.env_name);
  if (t.spec.exemplar.empty()) t.spec.exemplar = default_exemplar(t.spec.env_name);
  const auto sg_path = join_path(path, "subgoals");
  if (j.contains("subgoals")) {
    const auto& sgs = j["subgoals"];
    if (!sgs.is_array()) throw FormatError(sg_path, "expected an array");
    for (std::size_t i = 0; i < sgs.size(); ++i) {
      const auto p = index_path(sg_path, i);
      if (!sgs[i].is_object()) throw FormatError(p, "expected a subgoal object");
      reject_unknown_keys(sgs[i], {"id", "kind", "args", "description"}, p);
      Subgoal g;
      g.id = require_string(sgs[i], "id", p);
      g.kind = require_string(sgs[i], "kind", p);
      g.args = get_strings(sgs[i], "args", p);
      g.description = get_string(sgs[i], "description", p, "");
      t.subgoals.push_back(std::move(g));
    }
  }
  if (j.contains("layout")) t.layout = j["layout"];
  if (j.contains("scripts"))
    out.scripts = scripts_from_json(j["scripts"], join_path(path, "scripts"), {"agent", "memory", "verifier"});
  return out;
}

SuiteFile load_suite_file(const std::string& file) {
  const auto doc = read_json_file(file);
  if (!doc.is_object()) throw FormatError(file, "expected a suite object");
  SuiteFile out;
  out.path = file;
  const auto kind = require_string(doc, "kind", file);
  const auto parsed = parse_task_kind(kind);
  if (!parsed) throw FormatError(join_path(file, "kind"), "unknown suite kind '" + kind + "'");
  out.kind = *parsed;
  if (out.kind == TaskKind::embodied) {
    reject_unknown_keys(doc, {"kind", "name", "env", "tasks"}, file);
    out.embodied.name = require_string(doc, "name", file);
    out.embodied.env = get_string(doc, "env", file, "");
    const auto& tasks = require(doc, "tasks", file);
    if (!tasks.is_array()) throw FormatError(join_path(file, "tasks"), "expected an array");
    for (std::size_t i = 0; i < tasks.size(); ++i)
      out.embodied.tasks.push_back(
          embodied_task_from_json(tasks[i], index_path(join_path(file, "tasks"), i), out.embodied.env));
  } else {
    reject_unknown_keys(doc, {"kind", "name", "instances"}, file);
    out.toolcall.name = require_string(doc, "name", file);
    const auto& instances = require(doc, "instances", file);
    if (!instances.is_array()) throw FormatError(join_path(file, "instances"), "expected an array");
    const auto dir = std::filesystem::path(file).parent_path();
    for (std::size_t i = 0; i < instances.size(); ++i) {
      const auto p = index_path(join_path(file, "instances"), i);
      if (instances[i].is_string()) {
        out.toolcall.instances.push_back(load_tool_instance((dir / instances[i].get<std::string>()).string()));
      } else {
        out.toolcall.instances.push_back(tool_suite_from_json(instances[i], p));
      }
    }
  }
  return out;
}

std::vector<std::string> validate_suite_file(const SuiteFile& suite) {
  std::vector<std::string> out;
  std::set<std::string> ids;
  if (suite.size() == 0) out.push_back(suite.name() + ": suite is empty");
  if (suite.kind == TaskKind::embodied) {
    const auto envs = environment_names();
    for (const auto& st : suite.embodied.tasks) {
      const auto& t = st.task;
      const auto where = "task '" + t.spec.id + "'";
      if (!ids.insert(t.spec.id).second) out.push_back(where + ": duplicate id");
      for (const auto& issue : validate_task(t.spec)) out.push_back(where + ": " + issue);
      if (std::find(envs.begin(), envs.end(), t.spec.env_name) == envs.end()) {
        out.push_back(where + ": unknown environment '" + t.spec.env_name + "'");
        continue;
      }
      const auto kinds = subgoal_kinds(t.spec.env_name);
      std::set<std::string> sg_ids;
      for (const auto& g : t.subgoals) {
        if (!sg_ids.insert(g.id).second) out.push_back(where + ": duplicate subgoal id '" + g.id + "'");
        if (std::find(kinds.begin(), kinds.end(), g.kind) == kinds.end())
          out.push_back(where + ": subgoal '" + g.id + "' has unknown kind '" + g.kind + "'");
      }
      try {
        auto env = make_environment(t);
        env->reset(42);
      } catch (const std::exception& e) {
        out.push_back(where + ": " + e.what());
      }
    }
  } else {
    for (const auto& inst : suite.toolcall.instances) {
      const auto where = "instance '" + inst.id + "'";
      if (!ids.insert(inst.id).second) out.push_back(where + ": duplicate id");
      for (const auto& issue : validate_suite(inst)) out.push_back(where + ": " + issue);
    }
  }
  return out;
}

}  // namespace ah
