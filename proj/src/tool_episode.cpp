// SPDX-License-Identifier: Apache-2.0
#include "agentharness/tool_episode.hpp"

#include <algorithm>

#include "agentharness/embodied.hpp"
#include "agentharness/mock_world.hpp"
#include "agentharness/prompts.hpp"
#include "agentharness/tool_modules.hpp"
#include "agentharness/toolcall.hpp"

namespace ah {

bool is_multi_turn_category(std::string_view category) noexcept {
  return category.starts_with("multi_turn");
}

namespace {

bool same_multiset(const std::vector<ToolCall>& a, const std::vector<ToolCall>& b) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const auto& call : a) {
    bool found = false;
    for (std::size_t i = 0; i < b.size() && !found; ++i) {
      if (!used[i] && b[i] == call) used[i] = found = true;
    }
    if (!found) return false;
  }
  return true;
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) out += "\n";
    out += lines[i];
  }
  return out;
}

}  // namespace

EpisodeRecord run_tool_episode(const ToolSuite& suite, const ToolWiring& wiring,
                               const ToolEpisodeOptions& options, std::uint64_t seed) {
  if (!wiring.agent) throw std::invalid_argument("run_tool_episode: agent backend is required");
  if (suite.turns.empty()) throw std::invalid_argument("run_tool_episode: suite has no turns");
  if (options.max_batches_per_turn < 1) throw std::invalid_argument("run_tool_episode: max_batches_per_turn < 1");

  EpisodeRecord rec;
  rec.task_id = suite.id;
  rec.suite = options.suite;
  rec.group = options.group;
  rec.kind = TaskKind::toolcall;
  rec.seed = seed;
  rec.module_config = {{"agent", wiring.agent->describe()},
                       {"selector", wiring.selector ? "on" : "off"},
                       {"editor", wiring.editor ? "on" : "off"},
                       {"category", suite.category},
                       {"max_batches_per_turn", std::to_string(options.max_batches_per_turn)},
                       {"prompt_version", std::string(kPromptVersion)}};
  rec.exit_reason = ExitReason::goal;

  auto account = [&](const Completion& c) {
    rec.generated_tokens += c.generated_tokens;
    rec.wall_seconds += c.wall_seconds;
  };

  const bool multi_turn = is_multi_turn_category(suite.category);
  const bool relevance = suite.relevance_expected != RelevanceExpectation::not_applicable;
  const bool parallel = is_parallel_category(suite.category);

  MockWorld world = suite.initial_world;
  MockWorld golden_world = suite.initial_world;
  std::vector<ChatMessage> conversation;
  bool aborted = false;

  for (std::size_t turn_index = 0; turn_index < suite.turns.size() && !aborted; ++turn_index) {
    const auto& turn = suite.turns[turn_index];
    TurnTranscript transcript;
    transcript.message = turn.message;
    conversation.push_back({Role::user, turn.message});

    std::vector<std::vector<ToolCall>> golden_batches;
    for (const auto& text : turn.golden_calls) golden_batches.push_back(parse_tool_calls(text));
    std::vector<ToolCall> golden_flat;
    for (const auto& b : golden_batches) golden_flat.insert(golden_flat.end(), b.begin(), b.end());

    std::vector<ExecutionResult> executed;
    std::vector<ToolCall> executed_calls;
    bool all_ok = true;
    std::optional<bool> relevance_verdict;
    std::string previous_call, previous_results;
    const std::string where = "turn " + std::to_string(turn_index + 1);

    for (int b = 0; b < options.max_batches_per_turn; ++b) {
      BatchTranscript batch;
      std::vector<ToolSpec> active = suite.tools;
      if (wiring.selector) {
        auto sel = select_tools({turn.message, previous_call, previous_results}, suite.tools, *wiring.selector,
                                options.module_params);
        if (sel.completion) account(*sel.completion);
        if (sel.warning) rec.warnings.push_back(where + ": " + *sel.warning);
        active = std::move(sel.tools);
        batch.selected_tools = std::move(sel.names);
      }

      std::vector<ChatMessage> messages;
      messages.push_back({Role::system, build_tool_system_prompt(active)});
      messages.insert(messages.end(), conversation.begin(), conversation.end());
      Completion reply;
      try {
        reply = wiring.agent->complete(messages, options.agent_params);
      } catch (const BackendError& e) {
        rec.exit_reason = ExitReason::backend_error;
        rec.warnings.push_back(where + ": agent backend failed: " + e.what());
        aborted = true;
        break;
      }
      account(reply);
      conversation.push_back({Role::assistant, reply.text});
      batch.raw = reply.text;

      std::optional<std::string> effective = reply.text;
      if (wiring.editor) {
        auto edit = edit_tool_call(reply.text, *wiring.editor, options.module_params);
        if (edit.completion) account(*edit.completion);
        if (edit.warning) rec.warnings.push_back(where + ": " + *edit.warning);
        batch.edit = std::string(to_string(edit.kind));
        if (edit.kind == EditKind::no_valid_tool_calls) effective.reset();
        else if (edit.kind == EditKind::repaired) effective = edit.text;
      }

      if (relevance && b == 0)
        relevance_verdict = classify_relevance(suite.relevance_expected, effective.value_or(""));

      std::optional<std::vector<ToolCall>> calls;
      if (effective) calls = try_parse_tool_calls(trim(*effective));
      if (!calls) {
        // Prose after a completed batch is how an agent closes a turn.
        if (effective && b == 0 && !golden_flat.empty()) {
          batch.verdicts.push_back({VerdictCategory::parse_error, "output is not a bracketed call list"});
          all_ok = false;
        }
        transcript.batches.push_back(std::move(batch));
        break;
      }
      if (calls->empty()) {
        transcript.batches.push_back(std::move(batch));
        break;
      }

      std::optional<std::size_t> expected;
      if (parallel && static_cast<std::size_t>(b) < golden_batches.size()) expected = golden_batches[b].size();
      batch.verdicts = validate_batch(*calls, suite.tools, expected);
      for (const auto& v : batch.verdicts)
        if (v.category != VerdictCategory::ok) all_ok = false;

      auto run = execute_calls(*calls, suite.tools, std::move(world));
      world = std::move(run.world);
      batch.executed = render_tool_calls(*calls);
      for (const auto& r : run.results) batch.results.push_back(render_result(r));
      previous_call = batch.executed;
      previous_results = join_lines(batch.results);
      conversation.push_back({Role::user, "[Tool Execution Results]\n" + previous_results});
      executed_calls.insert(executed_calls.end(), calls->begin(), calls->end());
      for (auto& r : run.results) executed.push_back(std::move(r));
      transcript.batches.push_back(std::move(batch));

      if (relevance) break;
      if (b + 1 == options.max_batches_per_turn)
        rec.warnings.push_back(where + ": batch cap reached");
    }

    if (relevance) {
      transcript.correct = relevance_verdict.value_or(false);
    } else if (multi_turn) {
      golden_world = execute_golden(turn.golden_calls, suite.tools, std::move(golden_world)).world;
      transcript.correct = !aborted && judge_turn(world, golden_world, executed, golden_flat);
    } else {
      transcript.correct = !aborted && all_ok && same_multiset(executed_calls, golden_flat);
    }
    rec.turns.push_back(std::move(transcript));
  }

  const auto correct = static_cast<double>(
      std::count_if(rec.turns.begin(), rec.turns.end(), [](const TurnTranscript& t) { return t.correct; }));
  rec.progress = correct / static_cast<double>(suite.turns.size());
  rec.success = rec.exit_reason != ExitReason::backend_error && correct == static_cast<double>(suite.turns.size());
  return rec;
}

}  // namespace ah
