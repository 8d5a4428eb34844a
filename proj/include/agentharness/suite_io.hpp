// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <vector>

#include "agentharness/embodied.hpp"
#include "agentharness/json_io.hpp"
#include "agentharness/tool_schema.hpp"

namespace ah {

// Suite files are JSON with a top-level "kind":
//
//   {"kind": "embodied", "name": "...", "env": "texthouse",
//    "tasks": [{"id", "goal", "instruction"?, "exemplar"?, "step_limit"?,
//               "env"?, "subgoals": [{"id", "kind", "args", "description"?}],
//               "layout"?, "scripts"?: {"agent"|"memory"|"verifier": script}}]}
//
//   {"kind": "toolcall", "name": "...",
//    "instances": [<tool instance object> | "relative/path.json"]}
//
// A tool instance file holds one object:
//   {"id", "category", "tools": [...], "turns": [{"message", "golden_calls"}],
//    "relevance_expected"?, "initial_world"?, "scripts"?}

struct EmbodiedSuiteTask {
  EmbodiedTask task;
  std::map<std::string, PolicyScript> scripts;  // agent / memory / verifier
};

struct EmbodiedSuite {
  std::string name;
  std::string env;
  std::vector<EmbodiedSuiteTask> tasks;
};

struct ToolCallSuite {
  std::string name;
  std::vector<ToolSuite> instances;
};

struct SuiteFile {
  TaskKind kind = TaskKind::embodied;
  std::string path;
  EmbodiedSuite embodied;
  ToolCallSuite toolcall;

  const std::string& name() const { return kind == TaskKind::embodied ? embodied.name : toolcall.name; }
  std::size_t size() const { return kind == TaskKind::embodied ? embodied.tasks.size() : toolcall.instances.size(); }
};

ToolSuite tool_suite_from_json(const Json& j, const std::string& path);
Json to_json(const ToolSuite& s);
/// Reads one tool instance file.
ToolSuite load_tool_instance(const std::string& file);

EmbodiedSuiteTask embodied_task_from_json(const Json& j, const std::string& path, const std::string& default_env);

/// Instance paths inside toolcall suites resolve against the suite file's
/// directory. Throws FormatError naming the offending path.
SuiteFile load_suite_file(const std::string& file);

/// Semantic problems: task invariants, unknown environments or subgoal
/// kinds, duplicate ids, layouts the environment rejects, tool suite issues.
std::vector<std::string> validate_suite_file(const SuiteFile& suite);

}  // namespace ah
