// SPDX-License-Identifier: Apache-2.0
#include "agentharness/policy.hpp"

#include <cctype>

namespace ah {

std::string_view to_string(Role r) noexcept {
  switch (r) {
    case Role::system: return "system";
    case Role::user: return "user";
    case Role::assistant: return "assistant";
  }
  return "user";
}

std::string_view to_string(BackendErrorKind k) noexcept {
  switch (k) {
    case BackendErrorKind::transport: return "transport";
    case BackendErrorKind::http_status: return "http_status";
    case BackendErrorKind::malformed_response: return "malformed_response";
    case BackendErrorKind::timeout: return "timeout";
  }
  return "transport";
}

std::string render_prompt(std::span<const ChatMessage> messages) {
  std::string out;
  for (const auto& m : messages) {
    out += to_string(m.role);
    out += ": ";
    out += m.content;
    out += '\n';
  }
  return out;
}

std::int64_t count_whitespace_tokens(std::string_view text) noexcept {
  std::int64_t n = 0;
  bool in_token = false;
  for (char c : text) {
    bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
    if (!space && !in_token) ++n;
    in_token = !space;
  }
  return n;
}

double throughput(std::span<const Completion> completions) {
  double tokens = 0.0;
  double seconds = 0.0;
  for (const auto& c : completions) {
    tokens += static_cast<double>(c.generated_tokens);
    seconds += c.wall_seconds;
  }
  if (!(seconds > 0.0)) throw std::domain_error("throughput undefined: zero total time");
  return tokens / seconds;
}

PolicyScript PolicyScript::replay(const std::vector<std::string>& responses) {
  for (std::size_t i = 0; i < responses.size(); ++i) {
    if (responses[i].empty()) throw std::invalid_argument("replay response is empty");
    for (std::size_t j = 0; j < responses.size(); ++j) {
      if (i != j && responses[j].find(responses[i]) != std::string::npos)
        throw std::invalid_argument("replay response " + std::to_string(i) +
                                    " is contained in response " + std::to_string(j));
    }
  }
  PolicyScript script;
  if (responses.empty()) return script;
  script.default_response = responses.front();
  for (std::size_t i = responses.size() - 1; i >= 1; --i)
    script.rules.push_back({responses[i - 1], false, responses[i]});
  return script;
}

bool operator==(const PolicyScript& a, const PolicyScript& b) {
  if (a.default_response != b.default_response || a.tokens_per_second != b.tokens_per_second ||
      a.rules.size() != b.rules.size())
    return false;
  for (std::size_t i = 0; i < a.rules.size(); ++i) {
    const auto& x = a.rules[i];
    const auto& y = b.rules[i];
    if (x.pattern != y.pattern || x.regex != y.regex || x.response != y.response) return false;
  }
  return true;
}

ScriptedBackend::ScriptedBackend(PolicyScript script, std::string label)
    : script_(std::move(script)), label_(std::move(label)) {
  compiled_.reserve(script_.rules.size());
  for (const auto& rule : script_.rules) {
    if (rule.regex)
      compiled_.emplace_back(std::regex(rule.pattern, std::regex::ECMAScript));
    else
      compiled_.emplace_back(std::nullopt);
  }
}

const std::string& ScriptedBackend::respond(std::string_view prompt) const {
  for (std::size_t i = 0; i < script_.rules.size(); ++i) {
    const auto& rule = script_.rules[i];
    bool hit = compiled_[i] ? std::regex_search(prompt.begin(), prompt.end(), *compiled_[i])
                            : prompt.find(rule.pattern) != std::string_view::npos;
    if (hit) return rule.response;
  }
  return script_.default_response;
}

Completion simulated_completion(std::string text, double tokens_per_second) {
  Completion c;
  c.generated_tokens = count_whitespace_tokens(text);
  c.wall_seconds = tokens_per_second > 0.0
                       ? static_cast<double>(c.generated_tokens) / tokens_per_second
                       : 0.0;
  c.text = std::move(text);
  return c;
}

Completion ScriptedBackend::complete(std::span<const ChatMessage> messages,
                                     const GenParams& /*params*/) const {
  return simulated_completion(respond(render_prompt(messages)), script_.tokens_per_second);
}

Completion RecordingBackend::complete(std::span<const ChatMessage> messages,
                                      const GenParams& params) const {
  {
    std::lock_guard lock(mutex_);
    calls_.emplace_back(messages.begin(), messages.end());
  }
  return inner_->complete(messages, params);
}

std::vector<std::vector<ChatMessage>> RecordingBackend::calls() const {
  std::lock_guard lock(mutex_);
  return calls_;
}

std::size_t RecordingBackend::call_count() const {
  std::lock_guard lock(mutex_);
  return calls_.size();
}

}  // namespace ah
