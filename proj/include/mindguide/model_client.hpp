#pragma once

#include <chrono>
#include <deque>
#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mindguide/messages.hpp"

namespace mindguide {

struct ModelConfig {
  std::string model_name{"gpt-4"};
  double temperature{0.5};
  std::optional<int> max_tokens;
  std::string endpoint_url{"https://api.openai.com/v1/chat/completions"};
  /// Name of the environment variable that holds the credential. The
  /// credential itself never lives in a config object.
  std::string api_key_env{"OPENAI_API_KEY"};
  std::chrono::seconds timeout{60};

  /// Throws std::invalid_argument on out-of-range temperature, non-positive
  /// max_tokens or timeout, an unparseable endpoint, or an empty env name.
  void validate() const;
};

class CompletionRequest {
 public:
  /// Throws std::invalid_argument when `messages` is empty.
  CompletionRequest(ModelConfig config, std::vector<Message> messages);

  const ModelConfig& config() const noexcept { return config_; }
  const std::vector<Message>& messages() const noexcept { return messages_; }

  friend bool operator==(const CompletionRequest& a, const CompletionRequest& b) {
    return a.messages_ == b.messages_ && a.config_.model_name == b.config_.model_name &&
           a.config_.temperature == b.config_.temperature && a.config_.max_tokens == b.config_.max_tokens;
  }

 private:
  ModelConfig config_;
  std::vector<Message> messages_;
};

enum class ModelErrorKind { Network, Auth, RateLimited, MalformedResponse, ScriptExhausted };

std::string_view model_error_code(ModelErrorKind kind) noexcept;

class ModelError : public std::runtime_error {
 public:
  ModelError(ModelErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ModelErrorKind kind() const noexcept { return kind_; }

 private:
  ModelErrorKind kind_;
};

class NetworkError : public ModelError {
 public:
  explicit NetworkError(const std::string& what, std::optional<int> http_status = std::nullopt)
      : ModelError(ModelErrorKind::Network, what), http_status_(http_status) {}
  /// Set when the server answered with an unexpected status code.
  std::optional<int> http_status() const noexcept { return http_status_; }

 private:
  std::optional<int> http_status_;
};

class AuthError : public ModelError {
 public:
  explicit AuthError(const std::string& what) : ModelError(ModelErrorKind::Auth, what) {}
};

class RateLimited : public ModelError {
 public:
  explicit RateLimited(const std::string& what, std::optional<std::chrono::seconds> retry_after = std::nullopt)
      : ModelError(ModelErrorKind::RateLimited, what), retry_after_(retry_after) {}
  std::optional<std::chrono::seconds> retry_after() const noexcept { return retry_after_; }

 private:
  std::optional<std::chrono::seconds> retry_after_;
};

class MalformedResponse : public ModelError {
 public:
  explicit MalformedResponse(const std::string& what)
      : ModelError(ModelErrorKind::MalformedResponse, what) {}
};

class ScriptExhausted : public ModelError {
 public:
  ScriptExhausted() : ModelError(ModelErrorKind::ScriptExhausted, "scripted backend has no replies left") {}
};

/// "system" / "user" / "assistant"
std::string_view wire_role(Role role) noexcept;
std::optional<Role> parse_wire_role(std::string_view name) noexcept;

/// Serializes a request to the chat-completions JSON body. Keys appear in
/// the order model, temperature, max_tokens (only when set), messages.
std::string encode_request(const CompletionRequest& request);

/// Returns the first choice's content as an AI message, whatever role the
/// wire claims. Throws MalformedResponse.
Message decode_response(std::string_view body);

/// A chat model: ordered messages in, one AI message out.
class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  virtual Message complete(const CompletionRequest& request) = 0;
};

/// Deterministic stand-in that hands out canned replies in order and keeps
/// every request it answered.
class ScriptedBackend final : public ChatBackend {
 public:
  explicit ScriptedBackend(std::vector<std::string> replies = {});

  /// Throws ScriptExhausted once the replies run out. Exhausted calls are
  /// not recorded.
  Message complete(const CompletionRequest& request) override;

  void push_reply(std::string reply);
  std::vector<CompletionRequest> calls_seen() const;
  std::size_t remaining() const;

 private:
  mutable std::mutex mutex_;
  std::deque<std::string> script_;
  std::vector<CompletionRequest> calls_seen_;
};

/// Looks up a credential by environment-variable name.
using CredentialLookup = std::function<std::optional<std::string>(const std::string& env_name)>;

std::optional<std::string> credential_from_environment(const std::string& env_name);

/// HTTP backend for chat-completions servers. Stateless per call, so one
/// instance may serve concurrent requests. No retries.
class RemoteBackend final : public ChatBackend {
 public:
  explicit RemoteBackend(CredentialLookup lookup = credential_from_environment);

  Message complete(const CompletionRequest& request) override;

 private:
  CredentialLookup lookup_;
};

}  // namespace mindguide
