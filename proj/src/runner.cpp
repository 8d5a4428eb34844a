// SPDX-License-Identifier: Apache-2.0
#include "agentharness/runner.hpp"

#include <atomic>
#include <condition_variable>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <thread>

#include "agentharness/http_backend.hpp"
#include "agentharness/react.hpp"
#include "agentharness/report.hpp"
#include "agentharness/sampling.hpp"
#include "agentharness/tool_episode.hpp"
#include "agentharness/tool_modules.hpp"

namespace ah {

namespace {

void check_from_task(const RunConfig& config, const std::map<std::string, PolicyScript>& scripts,
                     std::initializer_list<const char*> roles, const std::string& where,
                     std::vector<std::string>& problems) {
  for (const char* role : roles) {
    auto it = config.backends.find(role);
    if (it != config.backends.end() && it->second.type == "from_task" && !scripts.contains(role))
      problems.push_back(where + ": from_task " + role + " backend but the task has no '" + role + "' script");
  }
}

}  // namespace

Workload load_workload(const RunConfig& config) {
  Workload w;
  std::vector<std::string> problems;
  auto note = [&](const std::string& file, const std::vector<std::string>& issues) {
    for (const auto& i : issues) problems.push_back(file + ": " + i);
  };
  for (const auto& rel : config.suites) {
    const auto file = config.resolve(rel);
    SuiteFile suite;
    try {
      suite = load_suite_file(file);
    } catch (const std::exception& e) {
      problems.push_back(e.what());
      continue;
    }
    note(file, validate_suite_file(suite));
    if (suite.kind == TaskKind::embodied) {
      for (const auto& t : suite.embodied.tasks)
        check_from_task(config, t.scripts, {"agent", "memory", "verifier"}, file + ": task '" + t.task.spec.id + "'",
                        problems);
      w.embodied.push_back(std::move(suite.embodied));
    } else {
      for (const auto& inst : suite.toolcall.instances)
        check_from_task(config, inst.scripts, {"agent", "selector", "editor"}, file + ": instance '" + inst.id + "'",
                        problems);
      w.toolcall.push_back(std::move(suite.toolcall));
    }
  }
  if (config.manifest) {
    try {
      const auto manifest = load_manifest(config.resolve(*config.manifest));
      const auto sample =
          sample_suite(manifest, config.manifest_cap.value_or(manifest.cap), config.seed, &w.warnings);
      for (const auto& s : sample) {
        if (w.toolcall.empty() || w.toolcall.back().name != s.category) w.toolcall.push_back({s.category, {}});
        const auto file = (std::filesystem::path(manifest.base_dir) / s.instance).string();
        try {
          auto inst = load_tool_instance(file);
          if (inst.category != s.category)
            problems.push_back(file + ": category '" + inst.category + "' but listed under '" + s.category + "'");
          note(file, validate_suite(inst));
          check_from_task(config, inst.scripts, {"agent", "selector", "editor"}, file, problems);
          w.toolcall.back().instances.push_back(std::move(inst));
        } catch (const std::exception& e) {
          problems.push_back(e.what());
        }
      }
    } catch (const std::exception& e) {
      problems.push_back(e.what());
    }
  }
  if (problems.empty() && w.embodied.empty() && w.toolcall.empty()) problems.push_back("nothing to run");
  if (!problems.empty()) {
    std::string msg = "invalid workload:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw std::runtime_error(msg);
  }
  return w;
}

std::vector<EpisodeJob> plan_jobs(const RunConfig& config, const Workload& workload) {
  std::vector<EpisodeJob> jobs;
  for (const auto& cell : config.ablation) {
    for (const auto& suite : workload.embodied)
      for (const auto& task : suite.tasks) jobs.push_back({&cell, &suite, &task, nullptr, nullptr});
    for (const auto& suite : workload.toolcall)
      for (const auto& inst : suite.instances) jobs.push_back({&cell, nullptr, nullptr, &suite, &inst});
  }
  return jobs;
}

BackendHandle make_backend(const RunConfig& config, const std::string& role,
                           const std::map<std::string, PolicyScript>& task_scripts) {
  auto it = config.backends.find(role);
  if (it == config.backends.end()) return nullptr;
  const auto& spec = it->second;
  if (spec.type == "scripted") return std::make_shared<ScriptedBackend>(*spec.script);
  if (spec.type == "from_task") {
    auto s = task_scripts.find(role);
    if (s == task_scripts.end()) throw std::runtime_error("no '" + role + "' script for this task");
    return std::make_shared<ScriptedBackend>(s->second);
  }
  if (spec.type == "http") return std::make_shared<HttpBackend>(spec.http);
  if (spec.type == "rule_editor") return std::make_shared<RuleEditorBackend>(spec.tokens_per_second);
  if (spec.type == "keyword_selector") return std::make_shared<KeywordSelectorBackend>(spec.tokens_per_second);
  throw std::runtime_error("unknown backend type '" + spec.type + "'");
}

EpisodeRecord run_job(const RunConfig& config, const EpisodeJob& job) {
  const auto& cell = *job.cell;
  try {
    if (job.embodied_task) {
      const auto& scripts = job.embodied_task->scripts;
      ModuleWiring wiring;
      wiring.agent = make_backend(config, "agent", scripts);
      if (cell.memory) wiring.memory = make_backend(config, "memory", scripts);
      if (cell.verifier) wiring.verifier = make_backend(config, "verifier", scripts);
      EpisodeOptions opt;
      opt.step_limit = config.step_limit;
      opt.k_mem = config.k_mem;
      opt.retain_last = config.retain_last;
      opt.k_earlyexit = config.k_earlyexit;
      opt.early_exit_mode = config.early_exit_mode;
      opt.early_exit_instruction = config.early_exit_instruction;
      opt.agent_params = config.agent_params;
      opt.module_params = config.module_params;
      opt.suite = job.embodied_suite->name;
      opt.group = cell.label;
      auto env = make_environment(job.embodied_task->task);
      return run_episode(job.embodied_task->task, *env, wiring, opt, config.seed);
    }
    const auto& scripts = job.tool_instance->scripts;
    ToolWiring wiring;
    wiring.agent = make_backend(config, "agent", scripts);
    if (cell.selector) wiring.selector = make_backend(config, "selector", scripts);
    if (cell.editor) wiring.editor = make_backend(config, "editor", scripts);
    ToolEpisodeOptions opt;
    opt.max_batches_per_turn = config.max_batches_per_turn;
    opt.agent_params = config.agent_params;
    opt.module_params = config.module_params;
    opt.suite = job.tool_suite->name;
    opt.group = cell.label;
    return run_tool_episode(*job.tool_instance, wiring, opt, config.seed);
  } catch (const std::exception& e) {
    EpisodeRecord rec;
    rec.task_id = job.embodied_task ? job.embodied_task->task.spec.id : job.tool_instance->id;
    rec.suite = job.embodied_task ? job.embodied_suite->name : job.tool_suite->name;
    rec.group = cell.label;
    rec.kind = job.embodied_task ? TaskKind::embodied : TaskKind::toolcall;
    rec.seed = config.seed;
    rec.exit_reason = ExitReason::backend_error;
    rec.warnings.push_back(std::string("episode aborted: ") + e.what());
    return rec;
  }
}

std::vector<EpisodeRecord> run_jobs(const RunConfig& config, const std::vector<EpisodeJob>& jobs,
                                    const RecordSink& sink) {
  std::vector<std::optional<EpisodeRecord>> slots(jobs.size());
  std::mutex mutex;
  std::condition_variable ready;
  std::atomic<std::size_t> next_job{0};

  auto worker = [&] {
    for (std::size_t i = next_job++; i < jobs.size(); i = next_job++) {
      auto rec = run_job(config, jobs[i]);
      {
        std::lock_guard lock(mutex);
        slots[i] = std::move(rec);
      }
      ready.notify_all();
    }
  };
  const auto n_threads = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, config.workers)), jobs.size());
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);

  // This thread is the single writer: it emits records strictly in job order.
  std::vector<EpisodeRecord> out;
  out.reserve(jobs.size());
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    std::unique_lock lock(mutex);
    ready.wait(lock, [&] { return slots[i].has_value(); });
    out.push_back(std::move(*slots[i]));
    slots[i].reset();
    lock.unlock();
    if (sink) sink(out.back());
  }
  return out;
}

std::vector<EpisodeRecord> run_jobs_serial(const RunConfig& config, const std::vector<EpisodeJob>& jobs) {
  std::vector<EpisodeRecord> out;
  out.reserve(jobs.size());
  for (const auto& job : jobs) out.push_back(run_job(config, job));
  return out;
}

RunOutcome run(const RunConfig& config) {
  const auto workload = load_workload(config);
  const auto jobs = plan_jobs(config, workload);
  RunOutcome outcome;
  outcome.warnings = workload.warnings;
  const std::filesystem::path dir = config.resolve(config.output_dir);
  std::filesystem::create_directories(dir);
  outcome.jsonl_path = (dir / "episodes.jsonl").string();
  outcome.report_json_path = (dir / "report.json").string();
  outcome.report_text_path = (dir / "report.txt").string();

  std::ofstream jsonl(outcome.jsonl_path, std::ios::binary | std::ios::trunc);
  if (!jsonl) throw std::runtime_error("cannot write " + outcome.jsonl_path);
  run_jobs(config, jobs, [&](const EpisodeRecord& rec) {
    jsonl << to_jsonl_line(rec) << '\n';
    jsonl.flush();
    ++outcome.episodes;
    if (rec.exit_reason == ExitReason::backend_error) ++outcome.backend_errors;
  });
  jsonl.close();

  const auto loaded = load_records(outcome.jsonl_path);
  const auto report = build_report(loaded, config.retry_threshold);
  write_text_file(outcome.report_json_path, render_report_json(report));
  write_text_file(outcome.report_text_path, render_report_text(report));
  return outcome;
}

}  // namespace ah
