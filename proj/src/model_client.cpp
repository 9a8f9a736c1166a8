#include "mindguide/model_client.hpp"

#include <charconv>
#include <cstdlib>
#include <regex>

#include "httplib.h"
#include "json.hpp"

namespace mindguide {

namespace {

struct Endpoint {
  std::string scheme_host_port;
  std::string path;
};

std::optional<Endpoint> parse_endpoint(const std::string& url) {
  static const std::regex re(R"(^(https?://[^/:?#]+(?::[0-9]{1,5})?)(/[^#]*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, re)) return std::nullopt;
  Endpoint ep{m[1].str(), m[2].matched ? m[2].str() : std::string("/")};
  return ep;
}

std::optional<std::chrono::seconds> parse_retry_after(const std::string& value) {
  long secs = 0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, secs);
  if (ec != std::errc() || ptr != end || secs < 0) return std::nullopt;
  return std::chrono::seconds(secs);
}

}  // namespace

void ModelConfig::validate() const {
  if (!(temperature >= 0.0 && temperature <= 2.0)) {
    throw std::invalid_argument("temperature must lie in [0, 2]");
  }
  if (max_tokens && *max_tokens <= 0) throw std::invalid_argument("max_tokens must be positive");
  if (model_name.empty()) throw std::invalid_argument("model_name must not be empty");
  if (api_key_env.empty()) throw std::invalid_argument("api_key_env must name a variable");
  if (timeout.count() <= 0) throw std::invalid_argument("timeout must be positive");
  if (!parse_endpoint(endpoint_url)) {
    throw std::invalid_argument("endpoint_url is not an http(s) URL: " + endpoint_url);
  }
}

CompletionRequest::CompletionRequest(ModelConfig config, std::vector<Message> messages)
    : config_(std::move(config)), messages_(std::move(messages)) {
  if (messages_.empty()) throw std::invalid_argument("completion request needs at least one message");
}

std::string_view model_error_code(ModelErrorKind kind) noexcept {
  switch (kind) {
    case ModelErrorKind::Network:
      return "network_error";
    case ModelErrorKind::Auth:
      return "auth_error";
    case ModelErrorKind::RateLimited:
      return "rate_limited";
    case ModelErrorKind::MalformedResponse:
      return "malformed_response";
    case ModelErrorKind::ScriptExhausted:
      return "script_exhausted";
  }
  return "model_error";
}

std::string_view wire_role(Role role) noexcept {
  switch (role) {
    case Role::System:
      return "system";
    case Role::Human:
      return "user";
    case Role::AI:
      return "assistant";
  }
  return "user";
}

std::optional<Role> parse_wire_role(std::string_view name) noexcept {
  if (name == "system") return Role::System;
  if (name == "user") return Role::Human;
  if (name == "assistant") return Role::AI;
  return std::nullopt;
}

std::string encode_request(const CompletionRequest& request) {
  const auto& cfg = request.config();
  nlohmann::ordered_json body;
  body["model"] = cfg.model_name;
  body["temperature"] = cfg.temperature;
  if (cfg.max_tokens) body["max_tokens"] = *cfg.max_tokens;
  auto& messages = body["messages"] = nlohmann::ordered_json::array();
  for (const auto& msg : request.messages()) {
    messages.push_back({{"role", wire_role(msg.role)}, {"content", msg.content}});
  }
  return body.dump();
}

Message decode_response(std::string_view body) {
  const auto doc = nlohmann::json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) throw MalformedResponse("response body is not valid JSON");
  if (!doc.is_object()) throw MalformedResponse("response body is not a JSON object");

  const auto choices = doc.find("choices");
  if (choices == doc.end() || !choices->is_array()) {
    std::string what = "response has no choices array";
    if (auto err = doc.find("error"); err != doc.end() && err->is_object()) {
      if (auto msg = err->find("message"); msg != err->end() && msg->is_string()) {
        what += " (upstream error: " + msg->get<std::string>() + ")";
      }
    }
    throw MalformedResponse(what);
  }
  if (choices->empty()) throw MalformedResponse("response has an empty choices array");

  const auto& first = choices->front();
  if (!first.is_object()) throw MalformedResponse("first choice is not an object");
  const auto message = first.find("message");
  if (message == first.end() || !message->is_object()) {
    throw MalformedResponse("first choice has no message object");
  }
  const auto content = message->find("content");
  if (content == message->end() || !content->is_string()) {
    throw MalformedResponse("first choice message has no text content");
  }
  return Message{Role::AI, content->get<std::string>()};
}

ScriptedBackend::ScriptedBackend(std::vector<std::string> replies)
    : script_(std::make_move_iterator(replies.begin()), std::make_move_iterator(replies.end())) {}

Message ScriptedBackend::complete(const CompletionRequest& request) {
  std::lock_guard lock(mutex_);
  if (script_.empty()) throw ScriptExhausted();
  Message reply{Role::AI, std::move(script_.front())};
  script_.pop_front();
  calls_seen_.push_back(request);
  return reply;
}

void ScriptedBackend::push_reply(std::string reply) {
  std::lock_guard lock(mutex_);
  script_.push_back(std::move(reply));
}

std::vector<CompletionRequest> ScriptedBackend::calls_seen() const {
  std::lock_guard lock(mutex_);
  return calls_seen_;
}

std::size_t ScriptedBackend::remaining() const {
  std::lock_guard lock(mutex_);
  return script_.size();
}

std::optional<std::string> credential_from_environment(const std::string& env_name) {
  const char* value = std::getenv(env_name.c_str());
  if (value == nullptr || *value == '\0') return std::nullopt;
  return std::string(value);
}

RemoteBackend::RemoteBackend(CredentialLookup lookup) : lookup_(std::move(lookup)) {}

Message RemoteBackend::complete(const CompletionRequest& request) {
  const auto& cfg = request.config();
  const auto endpoint = parse_endpoint(cfg.endpoint_url);
  if (!endpoint) throw NetworkError("invalid endpoint URL: " + cfg.endpoint_url);

  const auto credential = lookup_(cfg.api_key_env);
  if (!credential) throw AuthError("credential variable " + cfg.api_key_env + " is not set");

  httplib::Client client(endpoint->scheme_host_port);
  if (!client.is_valid()) {
    throw NetworkError("cannot create HTTP client for " + endpoint->scheme_host_port);
  }
  const auto timeout = static_cast<time_t>(cfg.timeout.count());
  client.set_connection_timeout(timeout, 0);
  client.set_read_timeout(timeout, 0);
  client.set_write_timeout(timeout, 0);

  httplib::Headers headers{{"Authorization", "Bearer " + *credential}};
  const auto res = client.Post(endpoint->path, headers, encode_request(request), "application/json");
  if (!res) {
    throw NetworkError("request to " + endpoint->scheme_host_port + " failed: " + httplib::to_string(res.error()));
  }

  const int status = res->status;
  if (status == 401 || status == 403) throw AuthError("credential rejected (HTTP " + std::to_string(status) + ")");
  if (status == 429) {
    std::optional<std::chrono::seconds> retry_after;
    if (res->has_header("Retry-After")) retry_after = parse_retry_after(res->get_header_value("Retry-After"));
    throw RateLimited("rate limited by upstream", retry_after);
  }
  if (status < 200 || status >= 300) {
    throw NetworkError("upstream returned HTTP " + std::to_string(status), status);
  }
  return decode_response(res->body);
}

}  // namespace mindguide
