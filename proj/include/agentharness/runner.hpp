// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "agentharness/config.hpp"
#include "agentharness/metrics.hpp"
#include "agentharness/suite_io.hpp"

namespace ah {

/// Everything a run executes, loaded and validated up front.
struct Workload {
  std::vector<EmbodiedSuite> embodied;
  std::vector<ToolCallSuite> toolcall;  // manifest samples appear as one suite per category
  std::vector<std::string> warnings;
};

/// Throws std::runtime_error listing every problem (fail-fast).
Workload load_workload(const RunConfig& config);

/// One episode to run: cell x suite x task, in a fixed order.
struct EpisodeJob {
  const AblationCell* cell = nullptr;
  const EmbodiedSuite* embodied_suite = nullptr;
  const EmbodiedSuiteTask* embodied_task = nullptr;
  const ToolCallSuite* tool_suite = nullptr;
  const ToolSuite* tool_instance = nullptr;
};

std::vector<EpisodeJob> plan_jobs(const RunConfig& config, const Workload& workload);

/// Builds the backend for `role`, or nullptr when it is not configured or
/// disabled by the cell. `task_scripts` serves from_task backends.
BackendHandle make_backend(const RunConfig& config, const std::string& role,
                           const std::map<std::string, PolicyScript>& task_scripts);

/// Runs one job. Exceptions other than backend errors are caught and
/// recorded as a failed episode with a warning.
EpisodeRecord run_job(const RunConfig& config, const EpisodeJob& job);

using RecordSink = std::function<void(const EpisodeRecord&)>;

/// Runs all jobs on `config.workers` threads. `sink` sees records one at a
/// time in job order, whatever order they finish in.
std::vector<EpisodeRecord> run_jobs(const RunConfig& config, const std::vector<EpisodeJob>& jobs,
                                    const RecordSink& sink = {});

/// Single-threaded reference for run_jobs.
std::vector<EpisodeRecord> run_jobs_serial(const RunConfig& config, const std::vector<EpisodeJob>& jobs);

struct RunOutcome {
  std::string jsonl_path;
  std::string report_json_path;
  std::string report_text_path;
  std::int64_t episodes = 0;
  std::int64_t backend_errors = 0;
  std::vector<std::string> warnings;
};

/// Full run: episodes.jsonl (appended and flushed per record), then
/// report.json and report.txt computed from that file.
RunOutcome run(const RunConfig& config);

}  // namespace ah
