// SPDX-License-Identifier: Apache-2.0
#include "agentharness/json_io.hpp"
#include "agentharness/metrics.hpp"
#include "agentharness/report.hpp"
#include "doctest.h"

using namespace ah;

namespace {

EpisodeRecord embodied(const std::string& suite, bool success, double progress, std::vector<std::string> actions,
                       const std::string& group = "g") {
  EpisodeRecord r;
  r.task_id = suite + "_" + std::to_string(actions.size());
  r.suite = suite;
  r.group = group;
  r.success = success;
  r.progress = progress;
  r.exit_reason = success ? ExitReason::goal : ExitReason::step_limit;
  int i = 0;
  for (auto& a : actions) {
    r.steps.push_back({++i, "", a, "obs"});
    r.progress_trace.push_back(progress);
  }
  r.generated_tokens = 10;
  r.wall_seconds = 0.5;
  return r;
}

}  // namespace

TEST_CASE("rates") {
  std::vector<EpisodeRecord> rs{embodied("s", true, 1.0, {"a"}), embodied("s", false, 0.5, {"a"}),
                                embodied("s", false, 0.0, {"a"}), embodied("s", true, 1.0, {"a"})};
  CHECK(success_rate(rs) == 0.5);
  CHECK(failure_rate(rs) == 0.5);
  CHECK(progress_rate(rs) == doctest::Approx(0.625));
  CHECK_THROWS(success_rate({}));
}

TEST_CASE("retry loop detection") {
  std::vector<std::string> a{"go", "go ", " go", "turn", "x", "x", "x", "x", "go"};
  auto loops = detect_retry_loops(a, 3);
  REQUIRE(loops.size() == 2);
  CHECK(loops[0] == RetryLoop{"go", 1, 3});
  CHECK(loops[1] == RetryLoop{"x", 5, 4});
  CHECK(detect_retry_loops(a, 5).empty());
  CHECK(detect_retry_loops({}, 2).empty());
  CHECK_THROWS(detect_retry_loops(a, 1));
  CHECK(normalize_whitespace("  move \t forward ") == "move forward");
}

TEST_CASE("early exit arithmetic") {
  CHECK(redundancy_reduction(20, 12) == 0.4);
  CHECK(redundancy_reduction(5, 5) == 0.0);
  CHECK_THROWS(redundancy_reduction(5, 6));
  CHECK_THROWS(redundancy_reduction(5, 0));
  CHECK(progress_degradation(1.0, 0.4) == doctest::Approx(0.6));
  CHECK(progress_degradation(0.2, 0.4) == 0.0);
  CHECK_THROWS(progress_degradation(1.2, 0.4));
}

TEST_CASE("failure histogram") {
  std::vector<ValidationVerdict> v{{VerdictCategory::ok, ""},
                                   {VerdictCategory::parse_error, ""},
                                   {VerdictCategory::value_error, ""},
                                   {VerdictCategory::value_error, ""},
                                   {VerdictCategory::call_count_error, ""}};
  auto h = categorize_failures(v);
  CHECK(h.total() == 4);
  CHECK(h.by_category.at("VALUE_ERROR") == 2);
  CHECK(h.coarse.at("schema") == 1);
  CHECK(h.coarse.at("parameter_value") == 2);
  CHECK(h.coarse.at("other") == 1);
  CHECK(coarse_bucket(VerdictCategory::ok).empty());
}

TEST_CASE("summaries and aggregation") {
  std::vector<EpisodeRecord> rs{embodied("b", true, 1.0, {"a", "b"}),
                                embodied("a", false, 0.0, {"x", "x", "x", "y", "y", "y"}),
                                embodied("a", true, 1.0, {"q"}), embodied("a", false, 0.5, {"z"}, "h")};
  auto rep = aggregate(rs, 3);
  REQUIRE(rep.groups.size() == 2);
  CHECK(rep.groups[0].group == "g");
  REQUIRE(rep.groups[0].suites.size() == 2);
  const auto& a = rep.groups[0].suites[0];
  CHECK(a.suite == "a");
  CHECK(a.episodes == 2);
  CHECK(a.retry_loops == 2);
  CHECK(a.episodes_with_retry_loops == 1);
  CHECK(a.retry_loops_per_episode == 1.0);
  CHECK(a.tokens_per_second == doctest::Approx(20.0));
  const auto& avg = rep.groups[0].overall;
  CHECK(avg.suite == "Avg");
  CHECK(avg.episodes == 3);
  CHECK(avg.success_rate == doctest::Approx(0.75));  // mean of 0.5 and 1.0, not pooled 2/3

  std::vector<EpisodeRecord> shuffled{rs[3], rs[2], rs[0], rs[1]};
  CHECK(render_report_json(aggregate(shuffled, 3)) != "");
  auto again = aggregate(shuffled, 3);
  CHECK(again.groups[0].overall == rep.groups[0].overall);
}

TEST_CASE("audited early exits feed RR and PD") {
  auto r = embodied("s", true, 1.0, std::vector<std::string>(20, "a"));
  r.early_exit_step = 12;
  r.progress_at_exit = 0.4;
  auto m = summarize(std::vector<EpisodeRecord>{r}, 3);
  CHECK(m.audited_exits == 1);
  CHECK(*m.redundancy_reduction == 0.4);
  CHECK(*m.progress_degradation == doctest::Approx(0.6));
}

TEST_CASE("record parsing skips bad lines") {
  auto good = to_jsonl_line(embodied("s", true, 1.0, {"a"}));
  std::string text = good + "\n\n{not json\n" + R"({"task_id": "x"})" + "\n" + good + "\n";
  auto loaded = parse_records(text);
  CHECK(loaded.records.size() == 2);
  CHECK(loaded.skipped_lines == 2);
  CHECK(loaded.skip_reasons.size() == 2);
  auto rep = build_report(loaded, 3);
  CHECK(rep.skipped_lines == 2);
  const auto txt = render_report_text(rep);
  CHECK(txt.find("2 lines skipped") != std::string::npos);
  CHECK(txt.find("== g ==") != std::string::npos);
  auto j = Json::parse(render_report_json(rep));
  CHECK(j["skipped_lines"] == 2);
}

TEST_CASE("record json round trip") {
  auto r = embodied("s", false, 0.25, {"a", "b"});
  r.early_exit_step = 2;
  r.progress_at_exit = 0.25;
  r.warnings = {"w"};
  r.module_config = {{"agent", "scripted"}};
  r.turns = {{"m", {{"raw", "repaired", "[f()]", {"f"}, {{VerdictCategory::ok, ""}}, {"ok: 1"}}}, true}};
  CHECK(record_from_json(Json::parse(to_jsonl_line(r))) == r);
}
