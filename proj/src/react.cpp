// SPDX-License-Identifier: Apache-2.0
#include "agentharness/react.hpp"

#include <algorithm>
#include <cctype>

#include "agentharness/prompts.hpp"

namespace ah {

std::string_view to_string(EarlyExitMode m) noexcept {
  return m == EarlyExitMode::audit ? "audit" : "terminate";
}

std::optional<EarlyExitMode> parse_early_exit_mode(std::string_view s) noexcept {
  if (s == "terminate") return EarlyExitMode::terminate;
  if (s == "audit") return EarlyExitMode::audit;
  return std::nullopt;
}

namespace {

// Position right after `label` at the start of a line, searching from `from`.
std::optional<std::size_t> find_label(std::string_view text, std::string_view label, std::size_t from) {
  std::size_t pos = from;
  while (true) {
    pos = text.find(label, pos);
    if (pos == std::string_view::npos) return std::nullopt;
    std::size_t line_start = pos;
    while (line_start > 0 && (text[line_start - 1] == ' ' || text[line_start - 1] == '\t')) --line_start;
    if (line_start == 0 || text[line_start - 1] == '\n') return pos + label.size();
    pos += label.size();
  }
}

std::string_view rest_of_line(std::string_view text, std::size_t from) {
  auto eol = text.find('\n', from);
  return text.substr(from, eol == std::string_view::npos ? std::string_view::npos : eol - from);
}

}  // namespace

std::optional<ReactTurn> parse_react(std::string_view text) {
  ReactTurn out;
  std::size_t search_from = 0;
  if (auto t = find_label(text, "Thought:", 0)) {
    auto a = find_label(text, "Action:", *t);
    if (!a) return std::nullopt;
    out.thought = trim(text.substr(*t, *a - std::string_view("Action:").size() - *t));
    search_from = *t;
  }
  auto a = find_label(text, "Action:", search_from);
  if (!a) return std::nullopt;
  out.action = trim(rest_of_line(text, *a));
  if (out.action.empty()) return std::nullopt;
  return out;
}

bool should_invoke_memory(int t, const MemoryState& mem) { return t - mem.last_refresh_step >= mem.k_mem; }

bool should_invoke_verifier(int t, const VerifierConfig& cfg) {
  return cfg.enabled && cfg.k_earlyexit >= 1 && t % cfg.k_earlyexit == 0;
}

MemoryUpdate update_memory(const MemoryState& mem, std::span<const Step> recent, int t,
                           const PolicyBackend& backend, const GenParams& params) {
  if (recent.empty()) throw std::invalid_argument("update_memory: recent steps must be nonempty");
  MemoryUpdate out;
  out.state = mem;
  out.state.last_refresh_step = t;
  const auto messages = build_memory_prompt(mem.text, recent);
  try {
    out.completion = backend.complete(messages, params);
  } catch (const BackendError& e) {
    out.warning = "step " + std::to_string(t) + ": memory backend failed (" + e.what() + "); keeping previous memory";
    return out;
  }
  auto text = trim(out.completion->text);
  if (text.empty()) {
    out.warning = "step " + std::to_string(t) + ": memory backend returned nothing; keeping previous memory";
    return out;
  }
  out.state.text = std::move(text);
  return out;
}

VerifierVerdict parse_verdict(std::string_view text) {
  VerifierVerdict out;
  std::size_t b = 0;
  while (b < text.size() && !std::isalnum(static_cast<unsigned char>(text[b]))) ++b;
  std::size_t e = b;
  while (e < text.size() && std::isalnum(static_cast<unsigned char>(text[e]))) ++e;
  std::string token(text.substr(b, e - b));
  std::transform(token.begin(), token.end(), token.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (token == "1" || token == "yes") {
    out.exit = true;
  } else if (token != "0" && token != "no") {
    out.warning = "unparseable verifier verdict: '" + trim(text.substr(0, 80)) + "'";
  }
  return out;
}

VerifierVerdict verify_early_exit(std::span<const Step> trajectory, const TaskSpec& task,
                                  const PolicyBackend& backend, std::string_view instruction,
                                  const GenParams& params) {
  if (trajectory.empty()) throw std::invalid_argument("verify_early_exit: trajectory must be nonempty");
  const auto messages = build_early_exit_prompt(
      task, trajectory, instruction.empty() ? default_early_exit_instruction() : instruction);
  Completion c;
  try {
    c = backend.complete(messages, params);
  } catch (const BackendError& e) {
    VerifierVerdict out;
    out.warning = std::string("verifier backend failed (") + e.what() + "); continuing";
    return out;
  }
  auto out = parse_verdict(c.text);
  out.completion = std::move(c);
  return out;
}

EpisodeRecord run_episode(const EmbodiedTask& task, Environment& env, const ModuleWiring& wiring,
                          const EpisodeOptions& options, std::uint64_t seed) {
  if (!wiring.agent) throw std::invalid_argument("run_episode: agent backend is required");
  EpisodeRecord rec;
  rec.task_id = task.spec.id;
  rec.suite = options.suite;
  rec.group = options.group;
  rec.kind = TaskKind::embodied;
  rec.seed = seed;
  rec.module_config = {{"agent", wiring.agent->describe()},
                       {"memory", wiring.memory ? "on" : "off"},
                       {"verifier", wiring.verifier ? "on" : "off"},
                       {"k_mem", std::to_string(options.k_mem)},
                       {"retain_last", std::to_string(options.retain_last)},
                       {"k_earlyexit", std::to_string(options.k_earlyexit)},
                       {"early_exit_mode", std::string(to_string(options.early_exit_mode))},
                       {"prompt_version", std::string(kPromptVersion)}};

  const int limit = options.step_limit.value_or(task.spec.step_limit);
  MemoryState memory;
  memory.k_mem = options.k_mem;
  memory.retain_last = options.retain_last;
  const VerifierConfig verifier{options.k_earlyexit, wiring.verifier != nullptr};

  auto account = [&](const Completion& c) {
    rec.generated_tokens += c.generated_tokens;
    rec.wall_seconds += c.wall_seconds;
  };

  const auto init = env.reset(seed);
  rec.exit_reason = ExitReason::step_limit;
  bool finished = false;
  for (int t = 1; t <= limit && !finished; ++t) {
    if (wiring.memory && should_invoke_memory(t, memory)) {
      const int first = std::max(1, t - memory.k_mem);
      std::span<const Step> recent(rec.steps.data() + (first - 1), static_cast<std::size_t>(t - first));
      if (!recent.empty()) {
        auto update = update_memory(memory, recent, t, *wiring.memory, options.module_params);
        if (update.completion) account(*update.completion);
        if (update.warning) rec.warnings.push_back(*update.warning);
        memory = std::move(update.state);
      }
    }

    HistoryView view;
    if (wiring.memory) {
      view.memory = memory.text;
      const auto keep = std::min<std::size_t>(rec.steps.size(), static_cast<std::size_t>(memory.retain_last));
      view.steps = std::span<const Step>(rec.steps).last(keep);
    } else {
      view.steps = rec.steps;
    }
    const auto actions = env.valid_actions();
    const auto prompt = build_react_prompt(task.spec, init.text, view, actions);

    Completion reply;
    try {
      reply = wiring.agent->complete(prompt, options.agent_params);
    } catch (const BackendError& e) {
      rec.exit_reason = ExitReason::backend_error;
      rec.warnings.push_back("step " + std::to_string(t) + ": agent backend failed: " + e.what());
      break;
    }
    account(reply);

    Step step;
    step.index = t;
    if (auto parsed = parse_react(reply.text)) {
      step.thought = parsed->thought;
      step.action = parsed->action;
    } else {
      // Fed to the environment verbatim; it answers with its invalid-action message.
      step.action = trim(reply.text);
      if (step.action.empty()) step.action = "(empty response)";
      rec.warnings.push_back("step " + std::to_string(t) + ": unparseable agent output");
    }
    const auto obs = env.step(step.action);
    step.observation = obs.text;
    rec.steps.push_back(std::move(step));
    rec.progress_trace.push_back(env.progress());

    if (obs.done) {
      rec.exit_reason = ExitReason::goal;
      finished = true;
      continue;
    }
    if (should_invoke_verifier(t, verifier) && !rec.early_exit_step) {
      auto verdict = verify_early_exit(rec.steps, task.spec, *wiring.verifier, options.early_exit_instruction,
                                       options.module_params);
      if (verdict.completion) account(*verdict.completion);
      if (verdict.warning) rec.warnings.push_back("step " + std::to_string(t) + ": " + *verdict.warning);
      if (verdict.exit) {
        rec.early_exit_step = t;
        rec.progress_at_exit = env.progress();
        if (options.early_exit_mode == EarlyExitMode::terminate) {
          rec.exit_reason = ExitReason::early_exit;
          finished = true;
        }
      }
    }
  }
  rec.progress = env.progress();
  rec.success = env.done();
  return rec;
}

}  // namespace ah
