#include "mindguide/http_service.hpp"

#include "httplib.h"
#include "json.hpp"

namespace mindguide {

namespace {

using nlohmann::json;

json message_json(const Message& m) {
  return json{{"role", role_tag(m.role)}, {"content", m.content}};
}

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view code, const std::string& message,
                json extra = json::object()) {
  json err{{"code", code}, {"message", message}};
  err.update(extra);
  send_json(res, status, json{{"error", err}});
}

void send_service_error(httplib::Response& res, const ServiceError& e) {
  json extra = json::object();
  if (e.upstream()) extra["upstream"] = model_error_code(*e.upstream());
  if (e.retry_after()) {
    extra["retry_after_seconds"] = e.retry_after()->count();
    res.set_header("Retry-After", std::to_string(e.retry_after()->count()));
  }
  send_error(res, http_status_for(e.code()), service_error_code_name(e.code()), e.what(), extra);
}

}  // namespace

HttpService::HttpService(SessionManager& sessions, std::optional<std::filesystem::path> static_dir, LogSink log)
    : sessions_(sessions), log_(std::move(log)), server_(std::make_unique<httplib::Server>()) {
  // No SO_REUSEPORT: binding an occupied port has to fail.
  server_->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  install_routes();
  if (static_dir && !server_->set_mount_point("/", static_dir->string())) {
    throw std::runtime_error("cannot serve static files from " + static_dir->string());
  }
}

HttpService::~HttpService() { stop(); }

void HttpService::install_routes() {
  auto& srv = *server_;

  srv.Post("/api/sessions", [this](const httplib::Request& req, httplib::Response& res) {
    std::optional<std::string> persona_id;
    if (!req.body.empty()) {
      const auto body = json::parse(req.body, nullptr, false);
      if (body.is_discarded() || !body.is_object()) {
        return send_error(res, 400, "bad_request", "request body must be a JSON object");
      }
      if (auto it = body.find("persona_id"); it != body.end() && !it->is_null()) {
        if (!it->is_string()) return send_error(res, 400, "bad_request", "persona_id must be a string");
        persona_id = it->get<std::string>();
      }
    }
    try {
      auto created = sessions_.create_session(persona_id);
      send_json(res, 201, json{{"session_id", created.session_id}, {"welcome", message_json(created.welcome)}});
    } catch (const ServiceError& e) {
      send_service_error(res, e);
    }
  });

  srv.Post(R"(/api/sessions/([^/]+)/messages)", [this](const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    const auto body = json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.is_object()) {
      return send_error(res, 400, "bad_request", "request body must be a JSON object");
    }
    std::string content;
    if (auto it = body.find("content"); it != body.end() && !it->is_null()) {
      if (!it->is_string()) return send_error(res, 400, "bad_request", "content must be a string");
      content = it->get<std::string>();
    }
    try {
      const auto reply = sessions_.post_message(id, content);
      send_json(res, 200, json{{"reply", message_json(reply)}});
    } catch (const ServiceError& e) {
      send_service_error(res, e);
    }
  });

  srv.Get(R"(/api/sessions/([^/]+)/history)", [this](const httplib::Request& req, httplib::Response& res) {
    try {
      json messages = json::array();
      for (const auto& m : sessions_.get_history(req.matches[1])) messages.push_back(message_json(m));
      send_json(res, 200, json{{"messages", messages}});
    } catch (const ServiceError& e) {
      send_service_error(res, e);
    }
  });

  srv.Delete(R"(/api/sessions/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    try {
      sessions_.delete_session(req.matches[1]);
      res.status = 204;
    } catch (const ServiceError& e) {
      send_service_error(res, e);
    }
  });

  srv.set_exception_handler([this](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    std::string what = "unexpected error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      what = e.what();
    } catch (...) {
    }
    log_("internal error: " + what);
    send_error(res, 500, "internal_error", "internal server error");
  });

  srv.set_logger([this](const httplib::Request& req, const httplib::Response& res) {
    log_(req.method + " " + req.path + " -> " + std::to_string(res.status));
  });
}

bool HttpService::bind(const std::string& host, int port) {
  if (port == 0) {
    port_ = server_->bind_to_any_port(host);
    return port_ > 0;
  }
  if (!server_->bind_to_port(host, port)) return false;
  port_ = port;
  return true;
}

bool HttpService::listen() { return server_->listen_after_bind(); }

void HttpService::stop() {
  if (server_) server_->stop();
}

bool HttpService::is_running() const { return server_->is_running(); }

}  // namespace mindguide
