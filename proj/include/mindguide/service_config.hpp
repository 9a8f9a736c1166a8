#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "mindguide/memory.hpp"
#include "mindguide/model_client.hpp"

namespace mindguide {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ServiceConfig {
  std::string host{"127.0.0.1"};
  int port{8080};
  ModelConfig model;
  MemoryPolicy memory{MemoryPolicy::buffer()};
  /// Extra persona files; the built-in "mindguide" persona is always there.
  std::optional<std::filesystem::path> persona_dir;
  std::filesystem::path transcript_dir{"transcripts"};
  /// Built web UI assets served under "/".
  std::optional<std::filesystem::path> static_dir;
  std::chrono::minutes session_ttl{60};
};

/// Parses the JSON config document. Relative paths are resolved against
/// `base_dir`. Unknown keys are rejected, which also keeps credentials out
/// of config files. Throws ConfigError.
ServiceConfig parse_service_config(const std::string& text, const std::filesystem::path& base_dir = {});
ServiceConfig load_service_config(const std::filesystem::path& path);

/// Creates the transcript directory and checks that the persona and static
/// directories exist. Throws ConfigError.
void prepare_directories(const ServiceConfig& config);

/// Name of the environment variable that may point at a config file.
inline constexpr const char* kConfigEnvVar = "MINDGUIDE_CONFIG";

}  // namespace mindguide
