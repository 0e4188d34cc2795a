#pragma once

#include <cstdlib>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "tripbench/errors.hpp"

namespace tripbench {

struct ChatMessage {
  std::string role;
  std::string content;
};

struct ChatRequest {
  std::string model;
  double temperature = 1.0;
  std::vector<ChatMessage> messages;
};

struct ChatResponse {
  std::string content;
};

struct TransportError : Error {
  using Error::Error;
};

// Synchronous request/response chat contract.
class ChatClient {
 public:
  virtual ~ChatClient() = default;
  virtual ChatResponse complete(const ChatRequest& request) = 0;
};

// Replays a fixed list of model turns keyed by call index. Used by tests and
// the CLI's mock mode; episodes driven by it are bit-reproducible.
class MockChatClient : public ChatClient {
 public:
  explicit MockChatClient(std::vector<std::string> turns) : turns_(std::move(turns)) {}

  ChatResponse complete(const ChatRequest&) override {
    if (next_ >= turns_.size()) {
      throw TransportError("mock client: script exhausted at turn " + std::to_string(next_));
    }
    return {turns_[next_++]};
  }

  std::size_t turns_used() const { return next_; }

 private:
  std::vector<std::string> turns_;
  std::size_t next_ = 0;
};

struct HttpClientConfig {
  std::string base_url;  // e.g. https://api.example.com
  std::string api_key;   // bearer credential
  std::string path = "/v1/chat/completions";
  int timeout_seconds = 120;

  static HttpClientConfig from_env() {
    HttpClientConfig cfg;
    if (const char* url = std::getenv("TRIPBENCH_API_BASE")) cfg.base_url = url;
    if (const char* key = std::getenv("TRIPBENCH_API_KEY")) cfg.api_key = key;
    return cfg;
  }
};

// OpenAI-style chat-completions client. Requests and responses are kept
// verbatim in `wire_log` for audit.
class HttpChatClient : public ChatClient {
 public:
  explicit HttpChatClient(HttpClientConfig config);
  ChatResponse complete(const ChatRequest& request) override;

  const std::vector<nlohmann::json>& wire_log() const { return wire_log_; }

 private:
  HttpClientConfig config_;
  std::vector<nlohmann::json> wire_log_;
};

}  // namespace tripbench

// The HTTP implementation lives behind a macro so the test binaries do not
// pay for the socket machinery; the CLI defines it.
#ifdef TRIPBENCH_ENABLE_HTTP
#include <httplib.h>

namespace tripbench {

inline HttpChatClient::HttpChatClient(HttpClientConfig config) : config_(std::move(config)) {
  if (config_.base_url.empty()) {
    throw InvalidInputError("http chat client: TRIPBENCH_API_BASE is not set");
  }
}

inline ChatResponse HttpChatClient::complete(const ChatRequest& request) {
  nlohmann::json body{{"model", request.model}, {"temperature", request.temperature}};
  for (const auto& m : request.messages) {
    body["messages"].push_back({{"role", m.role}, {"content", m.content}});
  }

  httplib::Client client(config_.base_url);
  client.set_read_timeout(config_.timeout_seconds, 0);
  httplib::Headers headers;
  if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

  const std::string payload = body.dump();
  auto res = client.Post(config_.path, headers, payload, "application/json");
  wire_log_.push_back({{"request", body}});
  if (!res) {
    throw TransportError("http chat client: transport failure (" +
                         std::string(httplib::to_string(res.error())) + ")");
  }
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::parse_error& e) {
    throw TransportError(std::string("http chat client: unparseable response: ") + e.what());
  }
  wire_log_.back()["response"] = parsed;
  if (res->status != 200) {
    throw TransportError("http chat client: status " + std::to_string(res->status));
  }
  return {parsed.at("choices").at(0).at("message").at("content").get<std::string>()};
}

}  // namespace tripbench
#endif  // TRIPBENCH_ENABLE_HTTP
