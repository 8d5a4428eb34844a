// SPDX-License-Identifier: Apache-2.0
#include "agentharness/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include "agentharness/parallel.hpp"

namespace ah {

namespace {

void require_nonempty(std::span<const EpisodeRecord> records, const char* what) {
  if (records.empty()) throw std::invalid_argument(std::string(what) + ": no records");
}

void require_unit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
}

}  // namespace

double success_rate(std::span<const EpisodeRecord> records) {
  require_nonempty(records, "success_rate");
  const auto n = std::count_if(records.begin(), records.end(), [](const EpisodeRecord& r) { return r.success; });
  return static_cast<double>(n) / static_cast<double>(records.size());
}

double failure_rate(std::span<const EpisodeRecord> records) {
  require_nonempty(records, "failure_rate");
  const auto n = std::count_if(records.begin(), records.end(), [](const EpisodeRecord& r) { return !r.success; });
  return static_cast<double>(n) / static_cast<double>(records.size());
}

double progress_rate(std::span<const EpisodeRecord> records) {
  require_nonempty(records, "progress_rate");
  double sum = 0.0;
  for (const auto& r : records) sum += r.progress;
  return sum / static_cast<double>(records.size());
}

std::string normalize_whitespace(std::string_view s) {
  std::string out;
  bool pending_space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::vector<RetryLoop> detect_retry_loops(std::span<const std::string> actions, int threshold) {
  if (threshold < 2) throw std::invalid_argument("retry threshold must be >= 2");
  std::vector<RetryLoop> out;
  std::size_t i = 0;
  while (i < actions.size()) {
    const auto action = normalize_whitespace(actions[i]);
    std::size_t j = i + 1;
    while (j < actions.size() && normalize_whitespace(actions[j]) == action) ++j;
    if (j - i >= static_cast<std::size_t>(threshold))
      out.push_back({action, static_cast<int>(i) + 1, static_cast<int>(j - i)});
    i = j;
  }
  return out;
}

std::vector<std::string> episode_actions(const EpisodeRecord& record) {
  std::vector<std::string> out;
  if (record.kind == TaskKind::embodied) {
    for (const auto& s : record.steps) out.push_back(s.action);
  } else {
    for (const auto& t : record.turns)
      for (const auto& b : t.batches) out.push_back(b.raw);
  }
  return out;
}

double redundancy_reduction(int full_length, int exit_step) {
  if (exit_step < 1 || exit_step > full_length)
    throw std::invalid_argument("redundancy_reduction: need 1 <= exit_step <= full_length");
  return static_cast<double>(full_length - exit_step) / static_cast<double>(full_length);
}

double progress_degradation(double full_progress, double exit_progress) {
  require_unit(full_progress, "full_progress");
  require_unit(exit_progress, "exit_progress");
  return std::max(0.0, full_progress - exit_progress);
}

std::string_view coarse_bucket(VerdictCategory c) noexcept {
  switch (c) {
    case VerdictCategory::ok: return "";
    case VerdictCategory::parse_error:
    case VerdictCategory::wrong_function: return "schema";
    case VerdictCategory::missing_parameter:
    case VerdictCategory::unexpected_parameter:
    case VerdictCategory::value_error: return "parameter_value";
    case VerdictCategory::call_count_error: return "other";
  }
  return "other";
}

std::int64_t FailureHistogram::total() const {
  std::int64_t n = 0;
  for (const auto& [k, v] : by_category) n += v;
  return n;
}

FailureHistogram categorize_failures(std::span<const ValidationVerdict> verdicts) {
  FailureHistogram out;
  for (const auto& v : verdicts) {
    if (v.category == VerdictCategory::ok) continue;
    ++out.by_category[std::string(to_string(v.category))];
    ++out.coarse[std::string(coarse_bucket(v.category))];
  }
  return out;
}

std::vector<ValidationVerdict> episode_verdicts(const EpisodeRecord& record) {
  std::vector<ValidationVerdict> out;
  for (const auto& t : record.turns)
    for (const auto& b : t.batches) out.insert(out.end(), b.verdicts.begin(), b.verdicts.end());
  return out;
}

SuiteMetrics summarize(std::span<const EpisodeRecord> records, int retry_threshold) {
  require_nonempty(records, "summarize");
  SuiteMetrics m;
  m.group = records.front().group;
  m.suite = records.front().suite;
  m.episodes = static_cast<std::int64_t>(records.size());
  m.success_rate = success_rate(records);
  m.progress_rate = progress_rate(records);

  std::vector<std::vector<std::string>> sequences;
  sequences.reserve(records.size());
  for (const auto& r : records) sequences.push_back(episode_actions(r));
  const auto loops = retry_loop_counts(sequences, retry_threshold);

  std::vector<ValidationVerdict> verdicts;
  double rr_sum = 0.0, pd_sum = 0.0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (r.success) ++m.successes;
    m.retry_loops += loops[i];
    if (loops[i] > 0) ++m.episodes_with_retry_loops;
    const auto v = episode_verdicts(r);
    verdicts.insert(verdicts.end(), v.begin(), v.end());
    m.generated_tokens += r.generated_tokens;
    m.wall_seconds += r.wall_seconds;
    if (r.exit_reason == ExitReason::backend_error) ++m.backend_errors;
    if (r.early_exit_step && r.exit_reason != ExitReason::early_exit && r.progress_at_exit &&
        *r.early_exit_step <= static_cast<int>(r.steps.size())) {
      ++m.audited_exits;
      rr_sum += redundancy_reduction(static_cast<int>(r.steps.size()), *r.early_exit_step);
      pd_sum += progress_degradation(r.progress, *r.progress_at_exit);
    }
  }
  m.retry_loops_per_episode = static_cast<double>(m.retry_loops) / static_cast<double>(m.episodes);
  m.failures = categorize_failures(verdicts);
  if (m.wall_seconds > 0.0) m.tokens_per_second = static_cast<double>(m.generated_tokens) / m.wall_seconds;
  if (m.audited_exits > 0) {
    m.redundancy_reduction = rr_sum / static_cast<double>(m.audited_exits);
    m.progress_degradation = pd_sum / static_cast<double>(m.audited_exits);
  }
  return m;
}

MetricsReport aggregate(std::span<const EpisodeRecord> records, int retry_threshold) {
  MetricsReport report;
  report.retry_threshold = retry_threshold;
  std::map<std::string, std::map<std::string, std::vector<EpisodeRecord>>> buckets;
  for (const auto& r : records) buckets[r.group][r.suite].push_back(r);
  for (auto& [group, suites] : buckets) {
    GroupMetrics g;
    g.group = group;
    std::vector<EpisodeRecord> all;
    for (auto& [suite, recs] : suites) {
      g.suites.push_back(summarize(recs, retry_threshold));
      all.insert(all.end(), recs.begin(), recs.end());
    }
    // Counts pool every episode; the Avg rates weight suites equally.
    g.overall = summarize(all, retry_threshold);
    g.overall.suite = "Avg";
    double s = 0.0, p = 0.0;
    for (const auto& sm : g.suites) {
      s += sm.success_rate;
      p += sm.progress_rate;
    }
    g.overall.success_rate = s / static_cast<double>(g.suites.size());
    g.overall.progress_rate = p / static_cast<double>(g.suites.size());
    report.groups.push_back(std::move(g));
  }
  return report;
}

}  // namespace ah
