#pragma once

#include <chrono>
#include <condition_variable>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "mindguide/chain.hpp"
#include "mindguide/memory.hpp"
#include "mindguide/model_client.hpp"
#include "mindguide/persona.hpp"

namespace mindguide {

enum class ServiceErrorCode { UnknownSession, EmptyMessage, SessionBusy, UpstreamError, UnknownPersona };

std::string_view service_error_code_name(ServiceErrorCode code) noexcept;
int http_status_for(ServiceErrorCode code) noexcept;

class ServiceError : public std::runtime_error {
 public:
  ServiceError(ServiceErrorCode code, const std::string& what,
               std::optional<ModelErrorKind> upstream = std::nullopt,
               std::optional<std::chrono::seconds> retry_after = std::nullopt)
      : std::runtime_error(what), code_(code), upstream_(upstream), retry_after_(retry_after) {}

  ServiceErrorCode code() const noexcept { return code_; }
  /// The model error class behind an UpstreamError.
  std::optional<ModelErrorKind> upstream() const noexcept { return upstream_; }
  std::optional<std::chrono::seconds> retry_after() const noexcept { return retry_after_; }

 private:
  ServiceErrorCode code_;
  std::optional<ModelErrorKind> upstream_;
  std::optional<std::chrono::seconds> retry_after_;
};

using LogSink = std::function<void(std::string_view line)>;

/// Writes each line to stderr.
void log_to_stderr(std::string_view line);

struct CreatedSession {
  std::string session_id;
  Message welcome;
};

/// Live chat sessions, each with its own chain, memory and transcript file.
///
/// Safe to call from many threads. Messages for one session are handled one
/// at a time; a post that arrives while another is in flight for the same
/// session fails with SessionBusy instead of waiting.
class SessionManager {
 public:
  using Clock = std::function<std::chrono::steady_clock::time_point()>;

  struct Options {
    ModelConfig model;
    MemoryPolicy policy{MemoryPolicy::buffer()};
    std::filesystem::path transcript_dir{"transcripts"};
    std::chrono::minutes ttl{60};
    Clock clock{[] { return std::chrono::steady_clock::now(); }};
    LogSink log{log_to_stderr};
  };

  SessionManager(PersonaRegistry personas, std::shared_ptr<ChatBackend> backend, Options options);
  ~SessionManager();

  SessionManager(const SessionManager&) = delete;
  SessionManager& operator=(const SessionManager&) = delete;

  /// Uses the "mindguide" persona when `persona_id` is empty.
  CreatedSession create_session(const std::optional<std::string>& persona_id = std::nullopt);

  /// Runs the session's chain once and appends both messages to its
  /// transcript. `content` is stored as given; it is only trimmed to decide
  /// whether it is empty.
  Message post_message(const std::string& session_id, std::string_view content);

  /// Welcome followed by every exchange, in order.
  std::vector<Message> get_history(const std::string& session_id);

  /// Forgets the session; its transcript stays on disk.
  void delete_session(const std::string& session_id);

  /// Drops sessions idle for longer than the TTL. Sessions with a message in
  /// flight are skipped. Returns how many were dropped.
  std::size_t expire_idle();

  /// Calls expire_idle() every `interval` on a background thread until the
  /// manager is destroyed.
  void start_reaper(std::chrono::milliseconds interval);

  std::filesystem::path transcript_path(const std::string& session_id) const;
  std::size_t live_sessions() const;
  bool has_session(const std::string& session_id) const;

 private:
  struct Session;

  std::shared_ptr<Session> find(const std::string& session_id) const;
  std::string new_session_id();

  PersonaRegistry personas_;
  std::shared_ptr<ChatBackend> backend_;
  Options options_;

  mutable std::shared_mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Session>, std::less<>> sessions_;

  std::mutex rng_mutex_;
  std::mt19937_64 rng_;

  std::mutex reaper_mutex_;
  std::condition_variable_any reaper_cv_;
  std::jthread reaper_;
};

}  // namespace mindguide
