// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "agentharness/policy.hpp"

namespace ah {

struct HttpBackendConfig {
  std::string base_url = "http://127.0.0.1:8000";  // scheme://host[:port][/prefix]
  std::string model;
  std::string api_key_env = "OPENAI_API_KEY";
  double timeout_seconds = 120.0;
  int retry_backoff_ms = 500;  // one retry on transport errors
};

/// OpenAI-compatible chat-completions client.
///
/// POSTs {base_url}/v1/chat/completions and reads choices[0].message.content
/// and usage.completion_tokens (whitespace-token fallback when absent). A
/// fresh connection is opened per call, so concurrent use is safe.
class HttpBackend final : public PolicyBackend {
 public:
  explicit HttpBackend(HttpBackendConfig config);

  Completion complete(std::span<const ChatMessage> messages,
                      const GenParams& params) const override;
  std::string describe() const override;

  /// Request body for the given call; exposed for wire-format tests.
  std::string request_body(std::span<const ChatMessage> messages, const GenParams& params) const;

  /// Parses a response body; throws BackendError(malformed_response).
  static Completion parse_response(const std::string& body, double wall_seconds);

 private:
  HttpBackendConfig config_;
  std::string origin_;  // scheme://host:port
  std::string path_;    // prefix + /v1/chat/completions
};

}  // namespace ah
