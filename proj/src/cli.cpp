#include "mindguide/cli.hpp"

#include <pthread.h>
#include <signal.h>

#include <atomic>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "mindguide/chain.hpp"
#include "mindguide/http_service.hpp"
#include "mindguide/session_manager.hpp"
#include "mindguide/transcript.hpp"

namespace mindguide::cli {

std::vector<std::string> parse_script(const std::string& text) {
  const auto doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_array()) throw ScriptError("script must be a JSON array of strings");
  std::vector<std::string> replies;
  for (const auto& item : doc) {
    if (!item.is_string()) throw ScriptError("script entries must be strings");
    replies.push_back(item.get<std::string>());
  }
  return replies;
}

std::vector<std::string> load_script(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScriptError("cannot read script " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_script(buf.str());
}

int run_chat(const ChatOptions& options, std::istream& in, std::ostream& out, std::ostream& err) {
  ChainOptions chain_opts;
  chain_opts.preamble = options.persona.welcome;
  Chain chain = build_chain(options.persona, options.backend, options.model, options.policy, chain_opts);

  std::optional<TranscriptWriter> transcript;
  if (options.transcript) transcript.emplace(*options.transcript);

  const Message welcome{Role::AI, options.persona.welcome};
  if (transcript) transcript->append(welcome);
  out << "AI: " << welcome.content << '\n' << std::flush;

  std::string line;
  while (true) {
    if (options.show_prompt) out << "> " << std::flush;
    if (!std::getline(in, line)) break;
    if (line == "/quit") break;
    if (line == "/history") {
      out << format_transcript(visible_messages(chain.memory(), MemoryPolicy::buffer())) << '\n' << std::flush;
      continue;
    }
    if (line.find_first_not_of(" \t\r\v\f") == std::string::npos) continue;

    try {
      const auto result = chain.run(line);
      if (transcript) {
        transcript->append(Message{Role::Human, line});
        transcript->append(result.reply);
      }
      out << "AI: " << result.reply.content << '\n' << std::flush;
    } catch (const ModelError& e) {
      err << "error (" << model_error_code(e.kind()) << "): " << e.what() << '\n' << std::flush;
    }
  }
  return kSuccess;
}

namespace {

void write_hunk(std::ostream& out, std::size_t turn, const std::string& expected, const std::string& actual) {
  out << "@@ turn " << turn << " @@\n";
  auto emit = [&](char sign, const std::string& text) {
    std::istringstream lines(text);
    std::string l;
    bool any = false;
    while (std::getline(lines, l)) {
      out << sign << l << '\n';
      any = true;
    }
    if (!any) out << sign << '\n';
  };
  emit('-', expected);
  emit('+', actual);
}

}  // namespace

int run_replay(const ReplayOptions& options, std::ostream& out, std::ostream& err) {
  Conversation conv;
  try {
    conv = split_conversation(read_transcript(options.transcript));
  } catch (const TranscriptParseError& e) {
    err << "replay: " << options.transcript.string() << ": " << e.what() << '\n';
    return kUsageError;
  }
  if (options.script.size() != conv.exchanges.size()) {
    err << "replay: script has " << options.script.size() << " replies but the transcript has "
        << conv.exchanges.size() << " human turns\n";
    return kUsageError;
  }

  auto backend = std::make_shared<ScriptedBackend>(options.script);
  ChainOptions chain_opts;
  chain_opts.preamble = conv.welcome;
  Chain chain = build_chain(options.persona, backend, options.model, options.policy, chain_opts);

  std::size_t mismatches = 0;
  std::ostringstream diff;
  for (std::size_t i = 0; i < conv.exchanges.size(); ++i) {
    const auto& ex = conv.exchanges[i];
    std::string actual;
    try {
      actual = chain.run(ex.human().content).reply.content;
    } catch (const ModelError& e) {
      err << "replay: turn " << i + 1 << ": " << e.what() << '\n';
      return kUsageError;
    }
    if (actual != ex.ai().content) {
      if (mismatches == 0) diff << "--- " << options.transcript.string() << "\n+++ replay\n";
      write_hunk(diff, i + 1, ex.ai().content, actual);
      ++mismatches;
    }
  }

  if (mismatches > 0) {
    out << diff.str();
    err << "replay: " << mismatches << " of " << conv.exchanges.size() << " turns differ\n";
    return kMismatch;
  }
  out << "replay: all " << conv.exchanges.size() << " turns match\n";
  return kSuccess;
}

int run_serve(const ServiceConfig& config, std::shared_ptr<ChatBackend> backend, std::ostream& err) {
  try {
    prepare_directories(config);
  } catch (const ConfigError& e) {
    err << "serve: " << e.what() << '\n';
    return kUsageError;
  }

  PersonaRegistry personas;
  try {
    if (config.persona_dir) personas = PersonaRegistry::from_directory(*config.persona_dir);
  } catch (const PersonaError& e) {
    err << "serve: " << e.what() << '\n';
    return kUsageError;
  }

  // Block the shutdown signals before any thread starts so that only the
  // waiter below ever receives them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  SessionManager::Options opts;
  opts.model = config.model;
  opts.policy = config.memory;
  opts.transcript_dir = config.transcript_dir;
  opts.ttl = config.session_ttl;
  SessionManager sessions(std::move(personas), std::move(backend), opts);
  sessions.start_reaper(std::chrono::seconds(30));

  HttpService http(sessions, config.static_dir);
  if (!http.bind(config.host, config.port)) {
    err << "serve: cannot bind " << config.host << ":" << config.port << '\n';
    return kEnvironmentError;
  }

  std::atomic<bool> signalled{false};
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    signalled = true;
    http.stop();
  });

  err << "serve: listening on http://" << config.host << ":" << http.port() << '\n' << std::flush;
  http.listen();
  http.stop();

  // listen() can also return on its own; the waiter still needs waking.
  if (!signalled) pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  err << "serve: stopped\n";
  return kSuccess;
}

}  // namespace mindguide::cli
