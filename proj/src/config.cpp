// SPDX-License-Identifier: Apache-2.0
#include "agentharness/config.hpp"

#include <algorithm>
#include <filesystem>
#include <set>

namespace ah {

std::string RunConfig::resolve(const std::string& path) const {
  const std::filesystem::path p(path);
  if (p.is_absolute() || config_dir.empty()) return path;
  return (std::filesystem::path(config_dir) / p).lexically_normal().string();
}

namespace {

constexpr std::string_view kRoles[] = {"agent", "memory", "verifier", "selector", "editor"};

int bounded_int(const Json& j, const char* key, const std::string& path, int fallback, int lo) {
  const auto v = get_int(j, key, path, fallback);
  if (v < lo || v > 1'000'000)
    throw FormatError(join_path(path, key), "must be an integer in [" + std::to_string(lo) + ", 1000000]");
  return static_cast<int>(v);
}

GenParams params_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) throw FormatError(path, "expected an object");
  reject_unknown_keys(j, {"max_tokens", "temperature", "stop"}, path);
  GenParams p;
  p.max_tokens = bounded_int(j, "max_tokens", path, p.max_tokens, 1);
  p.temperature = get_number(j, "temperature", path, p.temperature);
  if (p.temperature < 0.0) throw FormatError(join_path(path, "temperature"), "must be >= 0");
  p.stop = get_strings(j, "stop", path);
  return p;
}

BackendSpec backend_from_json(const Json& j, const std::string& path, const std::string& role,
                              const std::string& config_dir) {
  if (!j.is_object()) throw FormatError(path, "expected a backend object");
  BackendSpec b;
  b.type = require_string(j, "type", path);
  if (b.type == "scripted") {
    reject_unknown_keys(j, {"type", "script", "script_file"}, path);
    const bool inline_script = j.contains("script");
    const bool file_script = j.contains("script_file");
    if (inline_script == file_script) throw FormatError(path, "scripted backend needs exactly one of script, script_file");
    if (inline_script) {
      b.script = script_from_json(j["script"], join_path(path, "script"));
    } else {
      auto file = require_string(j, "script_file", path);
      if (!std::filesystem::path(file).is_absolute() && !config_dir.empty())
        file = (std::filesystem::path(config_dir) / file).lexically_normal().string();
      b.script = script_from_json(read_json_file(file), file);
    }
  } else if (b.type == "from_task") {
    reject_unknown_keys(j, {"type"}, path);
  } else if (b.type == "http") {
    reject_unknown_keys(j, {"type", "base_url", "model", "api_key_env", "timeout_seconds", "retry_backoff_ms"}, path);
    b.http.base_url = get_string(j, "base_url", path, b.http.base_url);
    b.http.model = require_string(j, "model", path);
    b.http.api_key_env = get_string(j, "api_key_env", path, b.http.api_key_env);
    b.http.timeout_seconds = get_number(j, "timeout_seconds", path, b.http.timeout_seconds);
    if (!(b.http.timeout_seconds > 0.0)) throw FormatError(join_path(path, "timeout_seconds"), "must be > 0");
    b.http.retry_backoff_ms = bounded_int(j, "retry_backoff_ms", path, b.http.retry_backoff_ms, 0);
  } else if (b.type == "rule_editor" || b.type == "keyword_selector") {
    reject_unknown_keys(j, {"type", "tokens_per_second"}, path);
    if ((b.type == "rule_editor") != (role == "editor"))
      throw FormatError(join_path(path, "type"), "'" + b.type + "' cannot serve the " + role + " role");
    b.tokens_per_second = get_number(j, "tokens_per_second", path, b.tokens_per_second);
    if (!(b.tokens_per_second > 0.0)) throw FormatError(join_path(path, "tokens_per_second"), "must be > 0");
  } else {
    throw FormatError(join_path(path, "type"), "unknown backend type '" + b.type + "'");
  }
  return b;
}

}  // namespace

RunConfig config_from_json(const Json& j, const std::string& path, const std::string& config_dir) {
  if (!j.is_object()) throw FormatError(path, "expected a config object");
  std::vector<std::string_view> allowed;
  for (const auto& [key, doc] : config_keys())
    if (key.find('.') == std::string::npos) allowed.push_back(key);
  for (const auto& [key, unused] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw FormatError(join_path(path, key), "unknown key");
  }

  RunConfig c;
  c.config_dir = config_dir;
  c.suites = get_strings(j, "suites", path);
  if (j.contains("manifest")) c.manifest = require_string(j, "manifest", path);
  if (j.contains("manifest_cap")) c.manifest_cap = static_cast<std::size_t>(bounded_int(j, "manifest_cap", path, 50, 1));
  if (c.suites.empty() && !c.manifest) throw FormatError(path, "config needs suites or a manifest");
  c.output_dir = get_string(j, "output_dir", path, c.output_dir);
  const auto seed = get_int(j, "seed", path, 42);
  if (seed < 0) throw FormatError(join_path(path, "seed"), "must be non-negative");
  c.seed = static_cast<std::uint64_t>(seed);
  c.workers = bounded_int(j, "workers", path, c.workers, 1);
  c.retry_threshold = bounded_int(j, "retry_threshold", path, c.retry_threshold, 2);
  if (j.contains("step_limit") && !j["step_limit"].is_null()) c.step_limit = bounded_int(j, "step_limit", path, 30, 1);
  c.k_mem = bounded_int(j, "k_mem", path, c.k_mem, 1);
  c.retain_last = bounded_int(j, "retain_last", path, c.retain_last, 0);
  c.k_earlyexit = bounded_int(j, "k_earlyexit", path, c.k_earlyexit, 1);
  const auto mode = get_string(j, "early_exit_mode", path, "terminate");
  const auto parsed_mode = parse_early_exit_mode(mode);
  if (!parsed_mode) throw FormatError(join_path(path, "early_exit_mode"), "expected terminate or audit");
  c.early_exit_mode = *parsed_mode;
  c.early_exit_instruction = get_string(j, "early_exit_instruction", path, "");
  c.max_batches_per_turn = bounded_int(j, "max_batches_per_turn", path, c.max_batches_per_turn, 1);

  if (j.contains("gate")) {
    const auto gp = join_path(path, "gate");
    const auto& g = j["gate"];
    if (!g.is_object()) throw FormatError(gp, "expected an object");
    reject_unknown_keys(g, {"mode", "tau", "gamma"}, gp);
    const auto m = get_string(g, "mode", gp, "threshold");
    const auto pm = parse_gate_mode(m);
    if (!pm) throw FormatError(join_path(gp, "mode"), "expected threshold or factor");
    c.gate.mode = *pm;
    c.gate.tau = get_number(g, "tau", gp, c.gate.tau);
    c.gate.gamma = get_number(g, "gamma", gp, c.gate.gamma);
    try {
      validate(c.gate);
    } catch (const std::invalid_argument& e) {
      throw FormatError(gp, e.what());
    }
  }
  if (j.contains("agent_params")) c.agent_params = params_from_json(j["agent_params"], join_path(path, "agent_params"));
  if (j.contains("module_params"))
    c.module_params = params_from_json(j["module_params"], join_path(path, "module_params"));

  const auto bp = join_path(path, "backends");
  const auto& backends = require(j, "backends", path);
  if (!backends.is_object()) throw FormatError(bp, "expected an object");
  reject_unknown_keys(backends, {"agent", "memory", "verifier", "selector", "editor"}, bp);
  for (const auto role : kRoles) {
    const std::string r(role);
    if (backends.contains(r) && !backends[r].is_null())
      c.backends.emplace(r, backend_from_json(backends[r], join_path(bp, r), r, config_dir));
  }
  if (!c.backends.contains("agent")) throw FormatError(join_path(bp, "agent"), "agent backend is required");

  if (j.contains("ablation")) {
    const auto ap = join_path(path, "ablation");
    const auto& cells = j["ablation"];
    if (!cells.is_array() || cells.empty()) throw FormatError(ap, "expected a nonempty array");
    std::set<std::string> labels;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const auto p = index_path(ap, i);
      if (!cells[i].is_object()) throw FormatError(p, "expected an object");
      reject_unknown_keys(cells[i], {"label", "memory", "verifier", "selector", "editor"}, p);
      AblationCell cell;
      cell.label = require_string(cells[i], "label", p);
      if (cell.label.empty() || !labels.insert(cell.label).second)
        throw FormatError(join_path(p, "label"), "labels must be nonempty and unique");
      cell.memory = get_bool(cells[i], "memory", p, false);
      cell.verifier = get_bool(cells[i], "verifier", p, false);
      cell.selector = get_bool(cells[i], "selector", p, false);
      cell.editor = get_bool(cells[i], "editor", p, false);
      c.ablation.push_back(std::move(cell));
    }
  } else {
    c.ablation.push_back({"default", true, true, true, true});
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  return config_from_json(read_json_file(path), path, std::filesystem::path(path).parent_path().string());
}

const std::vector<std::pair<std::string, std::string>>& config_keys() {
  static const std::vector<std::pair<std::string, std::string>> keys{
      {"suites", "suite files (embodied or toolcall), relative to the config"},
      {"manifest", "tool instance manifest sampled per category"},
      {"manifest_cap", "per-category cap for the manifest (default: the manifest's cap)"},
      {"output_dir", "directory for episodes.jsonl, report.json, report.txt (default out)"},
      {"seed", "episode and sampling seed (default 42)"},
      {"workers", "concurrent episodes, >= 1 (default 1)"},
      {"retry_threshold", "minimum run length counted as a retry loop (default 3)"},
      {"step_limit", "overrides every embodied task's step limit"},
      {"k_mem", "memory refresh period in steps (default 5)"},
      {"retain_last", "raw steps shown next to the memory (default 2)"},
      {"k_earlyexit", "verifier period in steps (default 5)"},
      {"early_exit_mode", "terminate | audit (default terminate)"},
      {"early_exit_instruction", "replaces the built-in verifier instruction"},
      {"max_batches_per_turn", "tool-call batches allowed per user turn (default 8)"},
      {"gate", "denoise-demo gate: {mode: threshold|factor, tau: 0.9, gamma: 0.5}"},
      {"agent_params", "{max_tokens, temperature, stop} for the agent"},
      {"module_params", "{max_tokens, temperature, stop} for memory/verifier/selector/editor"},
      {"backends", "{agent, memory?, verifier?, selector?, editor?}: backend objects"},
      {"ablation", "[{label, memory, verifier, selector, editor}] cells (default: one cell, all on)"},
      {"backends.*.type", "scripted | from_task | http | rule_editor | keyword_selector"},
      {"backends.*.script", "inline script: {rules: [{match|regex, response}], default, replay, tokens_per_second}"},
      {"backends.*.script_file", "script JSON file, relative to the config"},
      {"backends.*.base_url", "http: server root, e.g. http://127.0.0.1:8000"},
      {"backends.*.model", "http: model name sent with each request"},
      {"backends.*.api_key_env", "http: environment variable holding the bearer token (default OPENAI_API_KEY)"},
      {"backends.*.timeout_seconds", "http: per-request timeout (default 120)"},
      {"backends.*.retry_backoff_ms", "http: delay before the single transport retry (default 500)"},
      {"backends.*.tokens_per_second", "rule_editor/keyword_selector: simulated decode speed (default 50)"},
  };
  return keys;
}

}  // namespace ah
