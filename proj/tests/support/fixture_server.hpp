#pragma once

#include <chrono>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "httplib.h"

namespace mindguide::support {

/// Serves one canned HTTP response for every POST and remembers what it got.
class FixtureServer {
 public:
  struct Canned {
    int status{200};
    std::map<std::string, std::string> headers;
    std::string body;
  };
  struct Seen {
    std::string path;
    std::string body;
    httplib::Headers headers;
  };

  FixtureServer() {
    server_.Post(R"(.*)", [this](const httplib::Request& req, httplib::Response& res) {
      std::lock_guard lock(mutex_);
      seen_.push_back(Seen{req.path, req.body, req.headers});
      res.status = canned_.status;
      for (const auto& [k, v] : canned_.headers) res.set_header(k, v);
      res.set_content(canned_.body, "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    if (port_ <= 0) throw std::runtime_error("fixture server could not bind");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~FixtureServer() {
    server_.stop();
    thread_.join();
  }

  void respond_with(Canned canned) {
    std::lock_guard lock(mutex_);
    canned_ = std::move(canned);
  }

  std::vector<Seen> seen() const {
    std::lock_guard lock(mutex_);
    return seen_;
  }

  std::string url(const std::string& path = "/v1/chat/completions") const {
    return "http://127.0.0.1:" + std::to_string(port_) + path;
  }

 private:
  httplib::Server server_;
  int port_{0};
  std::thread thread_;
  mutable std::mutex mutex_;
  Canned canned_;
  std::vector<Seen> seen_;
};

}  // namespace mindguide::support
