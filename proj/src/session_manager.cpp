#include "mindguide/session_manager.hpp"

#include <algorithm>
#include <cstdio>
#include <iostream>

#include "mindguide/transcript.hpp"

namespace mindguide {

std::string_view service_error_code_name(ServiceErrorCode code) noexcept {
  switch (code) {
    case ServiceErrorCode::UnknownSession:
      return "unknown_session";
    case ServiceErrorCode::EmptyMessage:
      return "empty_message";
    case ServiceErrorCode::SessionBusy:
      return "session_busy";
    case ServiceErrorCode::UpstreamError:
      return "upstream_error";
    case ServiceErrorCode::UnknownPersona:
      return "unknown_persona";
  }
  return "internal_error";
}

int http_status_for(ServiceErrorCode code) noexcept {
  switch (code) {
    case ServiceErrorCode::UnknownSession:
      return 404;
    case ServiceErrorCode::EmptyMessage:
      return 400;
    case ServiceErrorCode::SessionBusy:
      return 409;
    case ServiceErrorCode::UpstreamError:
      return 502;
    case ServiceErrorCode::UnknownPersona:
      return 404;
  }
  return 500;
}

void log_to_stderr(std::string_view line) {
  std::cerr << line << '\n';
}

struct SessionManager::Session {
  Session(std::string id_, std::string persona_id_, Chain chain_, std::filesystem::path path,
          std::chrono::steady_clock::time_point now)
      : id(std::move(id_)),
        persona_id(std::move(persona_id_)),
        chain(std::move(chain_)),
        created_at(std::chrono::system_clock::now()),
        transcript(std::move(path)),
        last_active(now) {}

  const std::string id;
  const std::string persona_id;
  // Guarded by run_mutex.
  Chain chain;
  const std::chrono::system_clock::time_point created_at;
  TranscriptWriter transcript;
  std::chrono::steady_clock::time_point last_active;
  std::mutex run_mutex;
};

namespace {

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
  });
}

}  // namespace

SessionManager::SessionManager(PersonaRegistry personas, std::shared_ptr<ChatBackend> backend, Options options)
    : personas_(std::move(personas)), backend_(std::move(backend)), options_(std::move(options)) {
  if (!backend_) throw std::invalid_argument("session manager needs a backend");
  options_.model.validate();
  std::random_device rd;
  std::seed_seq seq{rd(), rd(), rd(), rd(), rd(), rd(), rd(), rd()};
  rng_.seed(seq);
  std::filesystem::create_directories(options_.transcript_dir);
}

SessionManager::~SessionManager() {
  if (reaper_.joinable()) {
    reaper_.request_stop();
    reaper_cv_.notify_all();
    reaper_.join();
  }
}

std::string SessionManager::new_session_id() {
  std::lock_guard lock(rng_mutex_);
  char buf[33];
  std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(rng_()),
                static_cast<unsigned long long>(rng_()));
  return buf;
}

std::filesystem::path SessionManager::transcript_path(const std::string& session_id) const {
  return options_.transcript_dir / (session_id + ".jsonl");
}

std::shared_ptr<SessionManager::Session> SessionManager::find(const std::string& session_id) const {
  std::shared_lock lock(sessions_mutex_);
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) {
    throw ServiceError(ServiceErrorCode::UnknownSession, "no session with id '" + session_id + "'");
  }
  return it->second;
}

CreatedSession SessionManager::create_session(const std::optional<std::string>& persona_id) {
  const std::string pid = persona_id.value_or(kDefaultPersonaId);
  const Persona* persona = personas_.find(pid);
  if (persona == nullptr) throw ServiceError(ServiceErrorCode::UnknownPersona, "no persona named '" + pid + "'");

  ChainOptions chain_opts;
  chain_opts.preamble = persona->welcome;
  Chain chain = build_chain(*persona, backend_, options_.model, options_.policy, chain_opts);

  std::string id;
  std::shared_ptr<Session> session;
  {
    std::unique_lock lock(sessions_mutex_);
    do {
      id = new_session_id();
    } while (sessions_.contains(id) || std::filesystem::exists(transcript_path(id)));
    session = std::make_shared<Session>(id, pid, std::move(chain), transcript_path(id), options_.clock());
    sessions_.emplace(id, session);
  }

  Message welcome{Role::AI, persona->welcome};
  session->transcript.append(welcome);
  options_.log("session " + id + " created (persona " + pid + ")");
  return CreatedSession{id, std::move(welcome)};
}

Message SessionManager::post_message(const std::string& session_id, std::string_view content) {
  auto session = find(session_id);
  if (is_blank(content)) throw ServiceError(ServiceErrorCode::EmptyMessage, "message content is empty");

  std::unique_lock run(session->run_mutex, std::try_to_lock);
  if (!run.owns_lock()) {
    throw ServiceError(ServiceErrorCode::SessionBusy, "a message for this session is already being processed");
  }
  session->last_active = options_.clock();

  ChainOutput out{Message{}, {}};
  try {
    out = session->chain.run(content);
  } catch (const RateLimited& e) {
    options_.log("session " + session_id + ": upstream " + std::string(model_error_code(e.kind())) + ": " + e.what());
    throw ServiceError(ServiceErrorCode::UpstreamError, e.what(), e.kind(), e.retry_after());
  } catch (const ModelError& e) {
    options_.log("session " + session_id + ": upstream " + std::string(model_error_code(e.kind())) + ": " + e.what());
    throw ServiceError(ServiceErrorCode::UpstreamError, e.what(), e.kind());
  }

  session->transcript.append(Message{Role::Human, std::string(content)});
  session->transcript.append(out.reply);
  session->last_active = options_.clock();
  return out.reply;
}

std::vector<Message> SessionManager::get_history(const std::string& session_id) {
  auto session = find(session_id);
  std::lock_guard run(session->run_mutex);
  return visible_messages(session->chain.memory(), MemoryPolicy::buffer());
}

void SessionManager::delete_session(const std::string& session_id) {
  std::unique_lock lock(sessions_mutex_);
  if (sessions_.erase(session_id) == 0) {
    throw ServiceError(ServiceErrorCode::UnknownSession, "no session with id '" + session_id + "'");
  }
  lock.unlock();
  options_.log("session " + session_id + " deleted");
}

std::size_t SessionManager::expire_idle() {
  const auto now = options_.clock();
  std::vector<std::string> expired;
  {
    std::unique_lock lock(sessions_mutex_);
    for (auto it = sessions_.begin(); it != sessions_.end();) {
      auto& session = *it->second;
      std::unique_lock run(session.run_mutex, std::try_to_lock);
      if (run.owns_lock() && now - session.last_active > options_.ttl) {
        expired.push_back(it->first);
        run.unlock();
        it = sessions_.erase(it);
      } else {
        ++it;
      }
    }
  }
  for (const auto& id : expired) options_.log("session " + id + " expired");
  return expired.size();
}

void SessionManager::start_reaper(std::chrono::milliseconds interval) {
  if (reaper_.joinable()) return;
  reaper_ = std::jthread([this, interval](std::stop_token stop) {
    std::unique_lock lock(reaper_mutex_);
    while (!stop.stop_requested()) {
      if (reaper_cv_.wait_for(lock, stop, interval, [] { return false; })) break;
      if (stop.stop_requested()) break;
      lock.unlock();
      expire_idle();
      lock.lock();
    }
  });
}

std::size_t SessionManager::live_sessions() const {
  std::shared_lock lock(sessions_mutex_);
  return sessions_.size();
}

bool SessionManager::has_session(const std::string& session_id) const {
  std::shared_lock lock(sessions_mutex_);
  return sessions_.contains(session_id);
}

}  // namespace mindguide
