// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "agentharness/core.hpp"

namespace ah {

/// Throw std::invalid_argument on empty input.
double success_rate(std::span<const EpisodeRecord> records);
double failure_rate(std::span<const EpisodeRecord> records);
double progress_rate(std::span<const EpisodeRecord> records);

struct RetryLoop {
  std::string action;  // whitespace-normalized
  int start_step = 0;  // 1-based
  int length = 0;

  friend bool operator==(const RetryLoop&, const RetryLoop&) = default;
};

/// Collapses whitespace runs and trims; retry detection compares these.
std::string normalize_whitespace(std::string_view s);

/// Maximal runs of identical consecutive actions of length >= threshold.
/// Throws std::invalid_argument when threshold < 2.
std::vector<RetryLoop> detect_retry_loops(std::span<const std::string> actions, int threshold = 3);

/// Embodied: the step actions. Tool calling: every raw agent output.
std::vector<std::string> episode_actions(const EpisodeRecord& record);

/// (T - t_e) / T; requires 1 <= t_e <= T.
double redundancy_reduction(int full_length, int exit_step);

/// max(0, full - at_exit); both must lie in [0, 1].
double progress_degradation(double full_progress, double exit_progress);

/// Coarse error family: "schema" (PARSE_ERROR, WRONG_FUNCTION),
/// "parameter_value" (MISSING/UNEXPECTED_PARAMETER, VALUE_ERROR),
/// "other" (CALL_COUNT_ERROR), "" for OK.
std::string_view coarse_bucket(VerdictCategory c) noexcept;

struct FailureHistogram {
  std::map<std::string, std::int64_t> by_category;  // OK excluded
  std::map<std::string, std::int64_t> coarse;
  std::int64_t total() const;

  friend bool operator==(const FailureHistogram&, const FailureHistogram&) = default;
};

FailureHistogram categorize_failures(std::span<const ValidationVerdict> verdicts);

/// Every verdict recorded in a tool-calling episode.
std::vector<ValidationVerdict> episode_verdicts(const EpisodeRecord& record);

struct SuiteMetrics {
  std::string group;
  std::string suite;
  std::int64_t episodes = 0;
  std::int64_t successes = 0;
  double success_rate = 0.0;
  double progress_rate = 0.0;
  std::int64_t retry_loops = 0;         // corpus total
  double retry_loops_per_episode = 0.0;
  std::int64_t episodes_with_retry_loops = 0;
  FailureHistogram failures;
  std::int64_t generated_tokens = 0;
  double wall_seconds = 0.0;
  std::optional<double> tokens_per_second;  // nullopt when no time was spent
  std::int64_t backend_errors = 0;
  // Verifier audit: episodes where an exit was flagged but the rollout went on.
  std::int64_t audited_exits = 0;
  std::optional<double> redundancy_reduction;  // mean over audited exits
  std::optional<double> progress_degradation;

  friend bool operator==(const SuiteMetrics&, const SuiteMetrics&) = default;
};

struct GroupMetrics {
  std::string group;
  std::vector<SuiteMetrics> suites;  // ordered by suite name
  SuiteMetrics overall;              // suite = "Avg": mean of suite rates
};

struct MetricsReport {
  std::vector<GroupMetrics> groups;  // ordered by group label
  int retry_threshold = 3;
  std::int64_t skipped_lines = 0;
};

SuiteMetrics summarize(std::span<const EpisodeRecord> records, int retry_threshold);

/// Groups by (group, suite). Deterministic for any input order of equal
/// multisets because groups and suites are sorted by name and records keep
/// their relative order.
MetricsReport aggregate(std::span<const EpisodeRecord> records, int retry_threshold);

}  // namespace ah
