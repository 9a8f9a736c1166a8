#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mindguide/memory.hpp"
#include "mindguide/model_client.hpp"
#include "mindguide/persona.hpp"
#include "mindguide/service_config.hpp"

namespace mindguide::cli {

enum ExitCode : int { kSuccess = 0, kMismatch = 1, kUsageError = 2, kEnvironmentError = 3 };

class ScriptError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A script file is a JSON array of reply strings.
std::vector<std::string> parse_script(const std::string& text);
std::vector<std::string> load_script(const std::filesystem::path& path);

struct ChatOptions {
  Persona persona;
  std::shared_ptr<ChatBackend> backend;
  ModelConfig model;
  MemoryPolicy policy{MemoryPolicy::buffer()};
  /// When set, the conversation is written there in transcript format.
  std::optional<std::filesystem::path> transcript;
  /// Print a "> " prompt before each read.
  bool show_prompt{false};
};

/// Terminal loop: prints the welcome, then one reply per input line.
/// "/quit" or end of input stops; "/history" prints the conversation so far.
/// Model errors go to `err` and the loop continues.
int run_chat(const ChatOptions& options, std::istream& in, std::ostream& out, std::ostream& err);

struct ReplayOptions {
  std::filesystem::path transcript;
  std::vector<std::string> script;
  Persona persona;
  ModelConfig model;
  MemoryPolicy policy{MemoryPolicy::buffer()};
};

/// Re-runs every human turn of a transcript through a fresh chain fed by
/// the script. Returns kSuccess when all AI replies match, kMismatch with a
/// unified diff on `out` otherwise, and kUsageError when the transcript does
/// not parse or the script length differs from the number of human turns.
int run_replay(const ReplayOptions& options, std::ostream& out, std::ostream& err);

/// Serves the HTTP API until SIGINT or SIGTERM. Returns kEnvironmentError
/// when the address cannot be bound.
int run_serve(const ServiceConfig& config, std::shared_ptr<ChatBackend> backend, std::ostream& err);

}  // namespace mindguide::cli
