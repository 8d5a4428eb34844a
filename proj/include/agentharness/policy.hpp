// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <regex>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ah {

enum class Role { system, user, assistant };

std::string_view to_string(Role r) noexcept;

struct ChatMessage {
  Role role = Role::user;
  std::string content;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

struct GenParams {
  int max_tokens = 512;
  double temperature = 0.0;
  std::vector<std::string> stop;
  std::optional<std::int64_t> seed;
};

struct Completion {
  std::string text;
  std::int64_t generated_tokens = 0;
  double wall_seconds = 0.0;

  friend bool operator==(const Completion&, const Completion&) = default;
};

enum class BackendErrorKind { transport, http_status, malformed_response, timeout };

std::string_view to_string(BackendErrorKind k) noexcept;

class BackendError : public std::runtime_error {
 public:
  BackendError(BackendErrorKind kind, const std::string& message, int status = 0)
      : std::runtime_error(message), kind_(kind), status_(status) {}
  BackendErrorKind kind() const noexcept { return kind_; }
  int status() const noexcept { return status_; }

 private:
  BackendErrorKind kind_;
  int status_;
};

/// Uniform policy interface. `complete` must be safe to call concurrently.
class PolicyBackend {
 public:
  virtual ~PolicyBackend() = default;
  virtual Completion complete(std::span<const ChatMessage> messages,
                              const GenParams& params) const = 0;
  virtual std::string describe() const = 0;
};

using BackendHandle = std::shared_ptr<const PolicyBackend>;

/// Flattens messages to the text scripted matchers run against:
/// "<role>: <content>\n" per message.
std::string render_prompt(std::span<const ChatMessage> messages);

/// Whitespace-delimited token count (fallback when a server omits usage).
std::int64_t count_whitespace_tokens(std::string_view text) noexcept;

/// Σ tokens / Σ seconds. Throws std::domain_error when total time is zero.
double throughput(std::span<const Completion> completions);

struct ScriptRule {
  std::string pattern;
  bool regex = false;
  std::string response;
};

/// Ordered (matcher -> response) rules with a default. First match wins.
struct PolicyScript {
  std::vector<ScriptRule> rules;
  std::string default_response;
  /// Simulated decode speed; scripted latency is tokens / this value.
  double tokens_per_second = 50.0;

  /// Builds a stateless script that replays `responses` in order: response
  /// i is emitted once response i-1 appears in the prompt. Later rules are
  /// tried first. Throws std::invalid_argument if a response is empty or a
  /// substring of another.
  static PolicyScript replay(const std::vector<std::string>& responses);

  friend bool operator==(const PolicyScript& a, const PolicyScript& b);
};

/// Deterministic backend driven by a PolicyScript; a pure function of the
/// rendered prompt.
class ScriptedBackend final : public PolicyBackend {
 public:
  explicit ScriptedBackend(PolicyScript script, std::string label = "scripted");

  Completion complete(std::span<const ChatMessage> messages,
                      const GenParams& params) const override;
  std::string describe() const override { return label_; }
  const std::string& respond(std::string_view prompt) const;
  const PolicyScript& script() const noexcept { return script_; }

 private:
  PolicyScript script_;
  std::vector<std::optional<std::regex>> compiled_;
  std::string label_;
};

/// Shapes a response into a Completion with simulated, deterministic latency.
Completion simulated_completion(std::string text, double tokens_per_second);

/// Decorator that logs every prompt it forwards (tests and call counting).
class RecordingBackend final : public PolicyBackend {
 public:
  explicit RecordingBackend(BackendHandle inner) : inner_(std::move(inner)) {}

  Completion complete(std::span<const ChatMessage> messages,
                      const GenParams& params) const override;
  std::string describe() const override { return inner_->describe(); }

  std::vector<std::vector<ChatMessage>> calls() const;
  std::size_t call_count() const;

 private:
  BackendHandle inner_;
  mutable std::mutex mutex_;
  mutable std::vector<std::vector<ChatMessage>> calls_;
};

/// Always throws the configured error (simulates an unreachable endpoint).
class FailingBackend final : public PolicyBackend {
 public:
  explicit FailingBackend(BackendErrorKind kind, std::string message = "backend unavailable")
      : kind_(kind), message_(std::move(message)) {}
  Completion complete(std::span<const ChatMessage>, const GenParams&) const override {
    throw BackendError(kind_, message_);
  }
  std::string describe() const override { return "failing"; }

 private:
  BackendErrorKind kind_;
  std::string message_;
};

}  // namespace ah
