// SPDX-License-Identifier: Apache-2.0
#include "agentharness/http_backend.hpp"

#include <chrono>
#include <cstdlib>
#include <thread>

#include "httplib.h"
#include "json.hpp"

namespace ah {

namespace {

struct SplitUrl {
  std::string origin;
  std::string prefix;
};

SplitUrl split_base_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw std::invalid_argument("base_url needs a scheme: " + url);
  auto path_start = url.find('/', scheme_end + 3);
  SplitUrl out;
  if (path_start == std::string::npos) {
    out.origin = url;
  } else {
    out.origin = url.substr(0, path_start);
    out.prefix = url.substr(path_start);
    while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
  }
  return out;
}

}  // namespace

HttpBackend::HttpBackend(HttpBackendConfig config) : config_(std::move(config)) {
  auto split = split_base_url(config_.base_url);
  origin_ = split.origin;
  path_ = split.prefix + "/v1/chat/completions";
}

std::string HttpBackend::describe() const { return "http:" + config_.model + "@" + config_.base_url; }

std::string HttpBackend::request_body(std::span<const ChatMessage> messages,
                                      const GenParams& params) const {
  nlohmann::ordered_json body;
  body["model"] = config_.model;
  body["messages"] = nlohmann::ordered_json::array();
  for (const auto& m : messages)
    body["messages"].push_back({{"role", std::string(to_string(m.role))}, {"content", m.content}});
  body["max_tokens"] = params.max_tokens;
  body["temperature"] = params.temperature;
  if (!params.stop.empty()) body["stop"] = params.stop;
  if (params.seed) body["seed"] = *params.seed;
  return body.dump();
}

Completion HttpBackend::parse_response(const std::string& body, double wall_seconds) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw BackendError(BackendErrorKind::malformed_response, std::string("invalid JSON: ") + e.what());
  }
  const auto* content = [&]() -> const nlohmann::json* {
    if (!doc.is_object() || !doc.contains("choices") || !doc["choices"].is_array() ||
        doc["choices"].empty())
      return nullptr;
    const auto& choice = doc["choices"][0];
    if (!choice.is_object() || !choice.contains("message") || !choice["message"].is_object())
      return nullptr;
    const auto& message = choice["message"];
    if (!message.contains("content")) return nullptr;
    return &message["content"];
  }();
  if (content == nullptr)
    throw BackendError(BackendErrorKind::malformed_response, "missing choices[0].message.content");
  Completion c;
  if (content->is_string())
    c.text = content->get<std::string>();
  else if (!content->is_null())
    throw BackendError(BackendErrorKind::malformed_response, "message.content is not a string");
  c.wall_seconds = wall_seconds;
  if (doc.contains("usage") && doc["usage"].is_object() &&
      doc["usage"].contains("completion_tokens") && doc["usage"]["completion_tokens"].is_number_integer())
    c.generated_tokens = doc["usage"]["completion_tokens"].get<std::int64_t>();
  else
    c.generated_tokens = count_whitespace_tokens(c.text);
  return c;
}

Completion HttpBackend::complete(std::span<const ChatMessage> messages,
                                 const GenParams& params) const {
  if (messages.empty()) throw std::invalid_argument("complete: messages must be nonempty");
  const std::string body = request_body(messages, params);
  httplib::Headers headers;
  if (const char* key = std::getenv(config_.api_key_env.c_str()); key != nullptr && *key != '\0')
    headers.emplace("Authorization", std::string("Bearer ") + key);

  const auto timeout = std::chrono::duration<double>(config_.timeout_seconds);
  const auto timeout_us = std::chrono::duration_cast<std::chrono::microseconds>(timeout);
  for (int attempt = 0;; ++attempt) {
    httplib::Client client(origin_);
    client.set_connection_timeout(std::chrono::duration_cast<std::chrono::seconds>(timeout_us).count(),
                                  timeout_us.count() % 1000000);
    client.set_read_timeout(std::chrono::duration_cast<std::chrono::seconds>(timeout_us).count(),
                            timeout_us.count() % 1000000);
    client.set_write_timeout(std::chrono::duration_cast<std::chrono::seconds>(timeout_us).count(),
                             timeout_us.count() % 1000000);
    const auto start = std::chrono::steady_clock::now();
    auto result = client.Post(path_, headers, body, "application/json");
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (result) {
      if (result->status < 200 || result->status >= 300)
        throw BackendError(BackendErrorKind::http_status,
                           "HTTP " + std::to_string(result->status) + " from " + origin_ + path_,
                           result->status);
      return parse_response(result->body, elapsed);
    }
    const auto err = result.error();
    const bool timed_out = err == httplib::Error::ConnectionTimeout ||
                           (err == httplib::Error::Read && elapsed >= 0.95 * config_.timeout_seconds);
    if (timed_out)
      throw BackendError(BackendErrorKind::timeout, "request timed out after " +
                                                        std::to_string(elapsed) + "s");
    if (attempt >= 1)
      throw BackendError(BackendErrorKind::transport,
                         "transport error: " + httplib::to_string(err) + " (" + origin_ + ")");
    std::this_thread::sleep_for(std::chrono::milliseconds(config_.retry_backoff_ms));
  }
}

}  // namespace ah
