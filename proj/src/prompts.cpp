// SPDX-License-Identifier: Apache-2.0
#include "agentharness/prompts.hpp"

#include "agentharness/json_io.hpp"

namespace ah {

namespace {

// Templates use <<slot>> markers so literal braces in examples stay intact.

constexpr std::string_view kReactSystem = "You are a helpful assistant.";

constexpr std::string_view kReactUser =
    R"(<<task_instruction>>

Here is the example:
<<example>>

Now, it's your turn. You should perform thoughts and actions to accomplish the goal. Your response should use the following format:

Thought: <your thoughts>
Action: <your next action>

Your task is: <<task_goal>>
<<init_observation>>
<<interaction_history>>
The next action could be chosen from these valid actions: <<valid_actions>>)";

constexpr std::string_view kMemorySystem =
    R"(You are a memory updater.
Update the memory_str to reflect what the agent has done and learned so far.
Include important actions taken, locations visited, and key observations.
Keep the summary concise, chronological, and consistent.
Do not invent new facts or omit relevant past actions.
Write the memory in third-person, concise past tense, like a mission log.

Example 1:
Memory: (empty)

Thought: I should check nearby storage spaces for a spraybottle.
Action: go to cabinet 1
Observation: On the cabinet 1, you see a cloth 1, a soapbar 1, a soapbottle 1.

Example 2:
Memory: The agent has checked cabinet 1 and found no spraybottle, then moved to cabinet 2 and discovered it was closed. Cabinet 2 is still unopened and uninspected inside.

Thought: I need to open this cabinet to see what's inside.
Action: open cabinet 2
Observation: You open the cabinet 2. The cabinet 2 is open. In it, you see a candle 1, and a spraybottle 2.

Example 3:
Memory: The agent has searched cabinet 1 (without finding a spraybottle), opened cabinet 2 (where the spraybottle was found), picked up spraybottle 2, and moved to the toilet 1 (where a soapbottle was present).

Thought: It's time to place the spraybottle on the toilet to complete the task.
Action: put spraybottle 2 in/on toilet 1
Observation: You put the spraybottle 2 in/on the toilet 1.)";

constexpr std::string_view kMemoryUser =
    R"(Memory_str: <<previous_memory>>

Recent_steps: <<recent_steps>>

Please output the updated Memory_str only — a short narrative summary of what has been done and observed so far.
No explanations or formatting other than plain text.

Memory_str: )";

constexpr std::string_view kEarlyExitUser =
    R"(You will be given a historical scenario in which you are placed in a specific environment with a designated objective to accomplish.

### Task Description:
<<task_instruction>>

### Your Objective:
<<task_goal>>

Your Current History:
<<interaction_history>>

Instructions:
<<early_exit_instruction>>

Do not include any additional text or explanations in your response.)";

constexpr std::string_view kEarlyExitInstruction =
    "Decide whether the agent should stop now. Answer 1 if the task has already been completed, "
    "or if the agent is stuck in a deadlock or a repetitive loop (for example, repeating the same "
    "action without new observations) so that further steps are unlikely to help. Answer 0 if the "
    "agent is still making progress. Respond with a single digit: 1 or 0.";

constexpr std::string_view kToolSystem =
    R"(You are an expert in composing functions. You are given a question and a set of possible functions. Based on the question, you will need to make one or more function/tool calls to achieve the purpose.

If none of the functions can be used, point it out. If the given question lacks the parameters required by the function, also point it out.
You should only return the function calls in your response.

If you decide to invoke any of the function(s), you MUST put it in the format of [func_name1(params_name1=params_value1, params_name2=params_value2...), func_name2(params)]

You SHOULD NOT include any other text in the response.

At each turn, you should try your best to complete the tasks requested by the user within the current turn. Continue to output functions to call until you have fulfilled the user's request to the best of your ability. Once you have no more functions to call, the system will consider the current turn complete and proceed to the next turn or task.

Here is a list of functions in JSON format that you can invoke.
<<function_descriptions>>)";

constexpr std::string_view kSelectorSystem =
    R"(You are a tool selector for a function-calling agent.

Task:
Given a user message ([User Message]), the previous tool call ([Tool Call]) and its results ([Tool Execution Results]), you must select a minimum of 3 distinct functions from the provided list.

Rules:
- Output at least 3 function names, and no more than 10 functions.
- Use ONLY names from the provided function list.
- Output ONLY function names. No explanations or extra text.
- Prioritize the [USER MESSAGE] above all else; use previous tool calls and results only as supplementary context.)";

constexpr std::string_view kSelectorUser =
    R"(Functions:
<<available_functions>>

<<interaction_history>>

Selected Functions:)";

constexpr std::string_view kEditorSystem =
    R"(You are a strict tool-call format auditor and repairer.

Your task:
Repair or validate a broken tool-call and output a final call that strictly follows TOOL_CALL_FORMAT.

Rules:
- If the tool-call is already valid and correct, output UNCHANGED.
- If the tool-call is textual explanations, output NO_VALID_TOOL_CALLS.
- If the tool-call contains both explanations and tool-calls, remove the explanations and correct the tool-calls.
- If the tool-call does not conform to TOOL_CALL_FORMAT, repair any format or schema errors and output the corrected tool-call only; do not invent functions or parameters.

TOOL_CALL_FORMAT:
[func_name1(param_name1=param_value1, param_name2=param_value2, ...),
func_name2(param_name3=param_value3, ...)]

Examples:

BROKEN_TOOL_CALL 1:
[cd(folder="academic_venture")]
Output:
UNCHANGED

BROKEN_TOOL_CALL 2:
cd(folder="academic_venture")
Output:
[cd(folder="academic_venture")]

BROKEN_TOOL_CALL 3:
{"cd": {"folder": "academic_venture"}}
Output:
[cd(folder="academic_venture")]

BROKEN_TOOL_CALL 4:
The task is now complete.
Output:
NO_VALID_TOOL_CALLS

BROKEN_TOOL_CALL 5:
The task is now complete. The final tool-call is {"ls": {}}
Output:
[ls()])";

constexpr std::string_view kEditorHead = "BROKEN_TOOL_CALL (to be audited and possibly corrected):\n";
constexpr std::string_view kEditorTail =
    "\n\nNow produce the final output according to the rules above.\n"
    "No explanations, markdown, or extra text.\n\nOutput:";

constexpr std::string_view kSelectorUserHeader = "[User Message]: ";

std::string fill(std::string_view tmpl, std::initializer_list<std::pair<std::string_view, std::string_view>> slots) {
  std::string out;
  out.reserve(tmpl.size() + 256);
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    auto open = tmpl.find("<<", pos);
    if (open == std::string_view::npos) {
      out.append(tmpl.substr(pos));
      break;
    }
    auto close = tmpl.find(">>", open + 2);
    auto name = tmpl.substr(open + 2, close - open - 2);
    out.append(tmpl.substr(pos, open - pos));
    bool found = false;
    for (const auto& [slot, value] : slots) {
      if (slot == name) {
        out.append(value);
        found = true;
        break;
      }
    }
    if (!found) throw std::logic_error("unfilled template slot " + std::string(name));
    pos = close + 2;
  }
  return out;
}

std::string join(std::span<const std::string> items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out.append(sep);
    out.append(items[i]);
  }
  return out;
}

constexpr std::string_view kTexthouseInstruction =
    "Your task is to interact with a virtual household simulator to accomplish a specific task. With each "
    "interaction, you will receive an observation. Your role is to pick one valid action per turn that brings you "
    "closer to the goal.";

constexpr std::string_view kGridnavInstruction =
    "Your task is to move through a grid room to accomplish a specific task. With each interaction, you will "
    "receive an observation of what lies in front of you. Your role is to pick one valid action per turn that "
    "brings you closer to the goal.";

constexpr std::string_view kTexthouseExemplar = R"(Your task is: put a mug in/on the desk 1.
Thought: Mugs usually sit on a countertop, so that is the first place to look.
Action: go to countertop 1
Observation: On the countertop 1, you see a mug, and a spoon.
Thought: The mug is here. Taking it.
Action: take mug from countertop 1
Observation: You pick up the mug from the countertop 1.
Thought: Now it goes to the desk.
Action: go to desk 1
Observation: On the desk 1, you see a pen.
Thought: Placing the mug finishes the task.
Action: put mug in/on desk 1
Observation: You put the mug in/on the desk 1.)";

constexpr std::string_view kGridnavExemplar = R"(Your task is: go to the blue key.
Thought: No key in view. Turning to scan the room.
Action: turn left
Observation: In front of you in this room, you can see several objects: There is a blue key right in front of you 2 steps away. The room has walls around you. You are facing a wall 4 steps away. You are not carrying anything.
Thought: The key is straight ahead, so I can head for it.
Action: go to blue key
Observation: In front of you in this room, you can see several objects: There is a blue key right in front of you 1 steps away. The room has walls around you. You are facing a wall 3 steps away. You are not carrying anything.)";

}  // namespace

std::string_view default_early_exit_instruction() { return kEarlyExitInstruction; }

std::string_view default_task_instruction(std::string_view env_name) {
  if (env_name == "texthouse") return kTexthouseInstruction;
  if (env_name == "gridnav") return kGridnavInstruction;
  return {};
}

std::string_view default_exemplar(std::string_view env_name) {
  if (env_name == "texthouse") return kTexthouseExemplar;
  if (env_name == "gridnav") return kGridnavExemplar;
  return {};
}

std::string render_steps(std::span<const Step> steps) {
  std::string out;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (i) out += "\n\n";
    out += "Thought: " + steps[i].thought + "\nAction: " + steps[i].action + "\nObservation: " +
           steps[i].observation;
  }
  return out;
}

std::string render_history(const HistoryView& view) {
  std::string out;
  if (view.memory) {
    out = "Memory: " + (view.memory->empty() ? std::string("(empty)") : *view.memory);
    if (!view.steps.empty()) out += "\n\n";
  }
  out += render_steps(view.steps);
  return out;
}

std::vector<ChatMessage> build_react_prompt(const TaskSpec& task, const std::string& init_observation,
                                            const HistoryView& history,
                                            std::span<const std::string> valid_actions) {
  std::string rendered = render_history(history);
  // The history block and its trailing blank line vanish when there is nothing to show.
  std::string block = rendered.empty() ? "" : "\n" + rendered + "\n";
  auto actions = join(valid_actions, ", ");
  return {{Role::system, std::string(kReactSystem)},
          {Role::user, fill(kReactUser, {{"task_instruction", task.instruction},
                                         {"example", task.exemplar},
                                         {"task_goal", task.goal},
                                         {"init_observation", init_observation},
                                         {"interaction_history", block},
                                         {"valid_actions", actions}})}};
}

std::vector<ChatMessage> build_memory_prompt(const std::string& previous, std::span<const Step> recent) {
  const std::string prev = previous.empty() ? "(empty)" : previous;
  const std::string steps = render_steps(recent);
  return {{Role::system, std::string(kMemorySystem)},
          {Role::user, fill(kMemoryUser, {{"previous_memory", prev}, {"recent_steps", steps}})}};
}

std::vector<ChatMessage> build_early_exit_prompt(const TaskSpec& task, std::span<const Step> trajectory,
                                                 std::string_view instruction) {
  const std::string history = render_steps(trajectory);
  return {{Role::system, std::string(kReactSystem)},
          {Role::user, fill(kEarlyExitUser, {{"task_instruction", task.instruction},
                                             {"task_goal", task.goal},
                                             {"interaction_history", history},
                                             {"early_exit_instruction", instruction}})}};
}

std::string render_function_descriptions(std::span<const ToolSpec> tools) {
  Json arr = Json::array();
  for (const auto& t : tools) arr.push_back(to_json(t));
  return arr.dump(4, ' ', false, Json::error_handler_t::replace);
}

std::string build_tool_system_prompt(std::span<const ToolSpec> tools) {
  const auto descriptions = render_function_descriptions(tools);
  return fill(kToolSystem, {{"function_descriptions", descriptions}});
}

std::vector<ChatMessage> build_selector_prompt(std::span<const ToolSpec> tools, const SelectorContext& ctx) {
  std::string functions;
  for (std::size_t i = 0; i < tools.size(); ++i) {
    if (i) functions += "\n";
    functions += "- " + tools[i].name + ": " + tools[i].description;
  }
  std::string history = std::string(kSelectorUserHeader) + ctx.user_message;
  if (!ctx.previous_call.empty()) {
    history += "\n[Tool Call]: " + ctx.previous_call;
    history += "\n[Tool Execution Results]: " + ctx.previous_results;
  }
  return {{Role::system, std::string(kSelectorSystem)},
          {Role::user, fill(kSelectorUser, {{"available_functions", functions}, {"interaction_history", history}})}};
}

std::vector<ChatMessage> build_editor_prompt(std::string_view model_response) {
  std::string user(kEditorHead);
  user.append(model_response);
  user.append(kEditorTail);
  return {{Role::system, std::string(kEditorSystem)}, {Role::user, std::move(user)}};
}

std::optional<std::string> extract_editor_input(std::string_view prompt_text) {
  auto head = prompt_text.rfind(kEditorHead);
  if (head == std::string_view::npos) return std::nullopt;
  auto start = head + kEditorHead.size();
  auto tail = prompt_text.rfind(kEditorTail);
  if (tail == std::string_view::npos || tail < start) return std::nullopt;
  return std::string(prompt_text.substr(start, tail - start));
}

std::optional<SelectorPromptParts> extract_selector_input(std::string_view prompt_text) {
  constexpr std::string_view kFunctions = "Functions:\n";
  auto start = prompt_text.find(kFunctions);
  auto header = prompt_text.find(std::string("\n\n") + std::string(kSelectorUserHeader));
  if (start == std::string_view::npos || header == std::string_view::npos || header < start) return std::nullopt;
  SelectorPromptParts parts;
  auto listing = prompt_text.substr(start + kFunctions.size(), header - start - kFunctions.size());
  std::size_t pos = 0;
  while (pos <= listing.size()) {
    auto eol = listing.find('\n', pos);
    auto line = listing.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    if (line.size() > 2 && line.starts_with("- ")) {
      auto colon = line.find(": ");
      parts.names.emplace_back(line.substr(2, colon == std::string_view::npos ? std::string_view::npos : colon - 2));
      parts.descriptions.emplace_back(colon == std::string_view::npos ? "" : line.substr(colon + 2));
    }
    if (eol == std::string_view::npos) break;
    pos = eol + 1;
  }
  auto msg_start = header + 2 + kSelectorUserHeader.size();
  auto msg_end = prompt_text.find("\n[Tool Call]: ", msg_start);
  if (msg_end == std::string_view::npos) msg_end = prompt_text.find("\n\nSelected Functions:", msg_start);
  parts.user_message = std::string(prompt_text.substr(msg_start, msg_end - msg_start));
  return parts;
}

}  // namespace ah
