// SPDX-License-Identifier: Apache-2.0
#include <algorithm>

#include "agentharness/json_io.hpp"
#include "agentharness/suite_io.hpp"
#include "agentharness/tool_episode.hpp"
#include "agentharness/tool_modules.hpp"
#include "agentharness/toolcall.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace ah;

namespace {

std::vector<ToolSpec> named_tools(int n) {
  std::vector<ToolSpec> out;
  for (int i = 0; i < n; ++i) out.push_back({"tool_" + std::to_string(i), "does thing " + std::to_string(i), {}, {}});
  return out;
}

BackendHandle always(std::string reply) {
  return std::make_shared<ScriptedBackend>(PolicyScript{{}, std::move(reply)});
}

ToolSuite instance(const std::string& category) {
  return load_tool_instance(test::data_path("suites/toolcall/instances/" + category + ".json"));
}

ToolWiring wiring_for(const ToolSuite& s, bool editor = false) {
  ToolWiring w;
  w.agent = std::make_shared<ScriptedBackend>(s.scripts.at("agent"));
  if (editor) w.editor = std::make_shared<RuleEditorBackend>();
  return w;
}

}  // namespace

TEST_CASE("selector output parsing") {
  const auto tools = named_tools(12);
  auto s = parse_selector_output("- tool_1\n2. `tool_3`\n* 'tool_5', tool_7;\ntool_1\nnot_a_tool", tools);
  CHECK_FALSE(s.fallback);
  CHECK(s.names == std::vector<std::string>{"tool_1", "tool_3", "tool_5", "tool_7"});
  CHECK(s.tools.size() == 4);

  std::string all;
  for (const auto& t : tools) all += t.name + "\n";
  auto capped = parse_selector_output(all, tools);
  CHECK(capped.names.size() == kSelectorMax);

  auto few = parse_selector_output("tool_1\ntool_2", tools);
  CHECK(few.fallback);
  CHECK(few.names.size() == tools.size());

  const auto two = named_tools(2);
  CHECK_FALSE(parse_selector_output("tool_0, tool_1", two).fallback);
  CHECK(parse_selector_output("tool_0", two).fallback);
}

TEST_CASE("select_tools falls back on backend failure") {
  const auto tools = named_tools(5);
  FailingBackend down(BackendErrorKind::timeout);
  auto s = select_tools({"hi", "", ""}, tools, down, {});
  CHECK(s.fallback);
  CHECK(s.warning);
  CHECK_FALSE(s.completion);
  CHECK_THROWS(select_tools({"hi", "", ""}, {}, down, {}));
}

TEST_CASE("keyword selector ranks by overlap") {
  std::vector<ToolSpec> tools{{"weather.get", "Get the weather forecast for a city.", {}, {}},
                              {"stock.price", "Get a stock price.", {}, {}},
                              {"email.send", "Send an email.", {}, {}},
                              {"calendar.add", "Add a calendar event.", {}, {}}};
  KeywordSelectorBackend b;
  auto s = select_tools({"What is the weather forecast in Paris?", "", ""}, tools, b, {});
  REQUIRE_FALSE(s.names.empty());
  CHECK(s.names[0] == "weather.get");
  CHECK(s.names.size() == 3);  // one hit, padded to the minimum
}

TEST_CASE("editor reply interpretation") {
  CHECK(interpret_editor_reply(" UNCHANGED \n").kind == EditKind::unchanged);
  CHECK(interpret_editor_reply("NO_VALID_TOOL_CALLS").kind == EditKind::no_valid_tool_calls);
  auto r = interpret_editor_reply("[f(x=1)]\n");
  CHECK(r.kind == EditKind::repaired);
  CHECK(r.text == "[f(x=1)]");
  FailingBackend down(BackendErrorKind::transport);
  auto kept = edit_tool_call("f(", down, {});
  CHECK(kept.kind == EditKind::unchanged);
  CHECK(kept.warning);
}

TEST_CASE("rule-based repair") {
  CHECK(rule_based_repair("[f(x=1)]").kind == EditKind::unchanged);
  CHECK(rule_based_repair("[]").kind == EditKind::unchanged);
  CHECK(rule_based_repair("```python\n[f(x=1)]\n```").text == "[f(x=1)]");
  CHECK(rule_based_repair("f(x=1), g()").text == "[f(x=1), g()]");
  CHECK(rule_based_repair(R"({"name": "f", "arguments": "{\"x\": 1}"})").text == "[f(x=1)]");
  CHECK(rule_based_repair(R"([{"name": "f", "parameters": {"x": 1}}, {"g": {}}])").text == "[f(x=1), g()]");
  CHECK(rule_based_repair("Sure! I will call [get_weather(city='Paris')] now.").text ==
        "[get_weather(city=\"Paris\")]");
  CHECK(rule_based_repair("Calling lookup(q=\"x\") should work").text == "[lookup(q=\"x\")]");
  CHECK(rule_based_repair("I cannot help with that (sorry).").kind == EditKind::no_valid_tool_calls);
  CHECK(rule_based_repair("").kind == EditKind::no_valid_tool_calls);
}

TEST_CASE("rule editor backend answers through the prompt") {
  RuleEditorBackend b;
  CHECK(edit_tool_call("cd(folder=\"x\")", b, {}).text == "[cd(folder=\"x\")]");
  CHECK(edit_tool_call("[cd(folder=\"x\")]", b, {}).kind == EditKind::unchanged);
  std::vector<ChatMessage> unrelated{{Role::user, "hello"}};
  CHECK(b.complete(unrelated, {}).text == kNoValidToolCalls);
}

TEST_CASE("relevance classification") {
  CHECK(classify_relevance(RelevanceExpectation::no_call_required, "I can't help."));
  CHECK(classify_relevance(RelevanceExpectation::no_call_required, "[]"));
  CHECK_FALSE(classify_relevance(RelevanceExpectation::no_call_required, "[f()]"));
  CHECK(classify_relevance(RelevanceExpectation::call_required, "[f()]"));
  CHECK_FALSE(classify_relevance(RelevanceExpectation::call_required, "f()"));
  CHECK_THROWS(classify_relevance(RelevanceExpectation::not_applicable, "[f()]"));
}

TEST_CASE("tool episode: editor rescues a bare call") {
  const auto s = instance("java");
  auto plain = run_tool_episode(s, wiring_for(s), {}, 42);
  CHECK_FALSE(plain.success);
  REQUIRE(plain.turns.size() == 1);
  CHECK(plain.turns[0].batches[0].verdicts.at(0).category == VerdictCategory::parse_error);

  auto edited = run_tool_episode(s, wiring_for(s, true), {}, 42);
  CHECK(edited.success);
  CHECK(edited.turns[0].batches[0].edit == "repaired");
  CHECK(edited.turns[0].batches[0].executed == "[NFILibrary.isMemberReadable(symbol=\"getVersion\")]");
  CHECK(edited.progress == 1.0);
  CHECK(validate_record(edited).empty());
}

TEST_CASE("tool episode: multi-turn state and batch feedback") {
  const auto s = instance("multi_turn_miss_func");
  auto rec = run_tool_episode(s, wiring_for(s), {}, 42);
  CHECK(rec.success);
  REQUIRE(rec.turns.size() == 2);
  CHECK(rec.turns[0].batches.size() == 3);  // two call batches and the closing answer
  CHECK(rec.turns[0].batches[1].results.at(0).find("630") != std::string::npos);
  CHECK(rec.exit_reason == ExitReason::goal);
}

TEST_CASE("tool episode: parallel count and hallucinated calls") {
  const auto pm = instance("parallel_multiple");
  auto rec = run_tool_episode(pm, wiring_for(pm), {}, 42);
  CHECK_FALSE(rec.success);
  const auto& v = rec.turns[0].batches[0].verdicts;
  CHECK(std::any_of(v.begin(), v.end(),
                    [](const ValidationVerdict& x) { return x.category == VerdictCategory::call_count_error; }));

  const auto irr = instance("live_irrelevance");
  CHECK_FALSE(run_tool_episode(irr, wiring_for(irr), {}, 42).success);
  const auto ok = instance("irrelevance");
  CHECK(run_tool_episode(ok, wiring_for(ok), {}, 42).success);
}

TEST_CASE("tool episode: backend errors and the batch cap") {
  const auto s = instance("simple");
  ToolWiring down{std::make_shared<FailingBackend>(BackendErrorKind::transport), nullptr, nullptr};
  auto rec = run_tool_episode(s, down, {}, 42);
  CHECK(rec.exit_reason == ExitReason::backend_error);
  CHECK_FALSE(rec.success);

  ToolWiring looping{always("[currency_conversion.convert(amount=150, from_currency='EUR', to_currency='CAD')]"),
                     nullptr, nullptr};
  ToolEpisodeOptions opt;
  opt.max_batches_per_turn = 3;
  auto capped = run_tool_episode(s, looping, opt, 42);
  CHECK(capped.turns[0].batches.size() == 3);
  CHECK_FALSE(capped.success);  // the call ran three times
  CHECK_FALSE(capped.warnings.empty());
}

TEST_CASE("tool episode: selector narrows the prompt") {
  const auto s = instance("live_multiple");
  auto w = wiring_for(s, true);
  auto recorder = std::make_shared<RecordingBackend>(std::make_shared<ScriptedBackend>(s.scripts.at("agent")));
  w.agent = recorder;
  w.selector = always("Services_4_FindProvider\nWeather_1_GetWeather\nServices_4_BookAppointment");
  auto rec = run_tool_episode(s, w, {}, 42);
  CHECK(rec.success);
  CHECK(rec.turns[0].batches[0].selected_tools.size() == 3);
  CHECK(rec.module_config.at("selector") != "off");
}

TEST_CASE("bundled tool instances validate") {
  auto suite = load_suite_file(test::data_path("suites/toolcall/bfcl_examples.json"));
  CHECK(suite.size() == 17);
  CHECK(validate_suite_file(suite).empty());
}
