#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "mindguide/session_manager.hpp"

namespace httplib {
class Server;
}

namespace mindguide {

/// JSON API over a SessionManager:
///
///   POST   /api/sessions                 {persona_id?} -> 201 {session_id, welcome}
///   POST   /api/sessions/{id}/messages   {content}     -> 200 {reply}
///   GET    /api/sessions/{id}/history                  -> 200 {messages}
///   DELETE /api/sessions/{id}                          -> 204
///
/// Failures answer {"error":{"code","message"}}. When a static directory is
/// given it is served under "/".
class HttpService {
 public:
  HttpService(SessionManager& sessions, std::optional<std::filesystem::path> static_dir = std::nullopt,
              LogSink log = log_to_stderr);
  ~HttpService();

  HttpService(const HttpService&) = delete;
  HttpService& operator=(const HttpService&) = delete;

  /// Port 0 picks a free port. Returns false if the address cannot be bound.
  bool bind(const std::string& host, int port);
  int port() const noexcept { return port_; }

  /// Blocks serving requests until stop() is called.
  bool listen();
  void stop();
  bool is_running() const;

 private:
  void install_routes();

  SessionManager& sessions_;
  LogSink log_;
  std::unique_ptr<httplib::Server> server_;
  int port_{-1};
};

}  // namespace mindguide
