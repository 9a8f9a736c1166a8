#include "mindguide/service_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace mindguide {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
std::optional<T> optional_field(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError("'" + std::string(key) + "' in " + where + " has the wrong type");
  }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_relative() && !base.empty() ? base / path : path;
}

ModelConfig parse_model(const json& obj) {
  if (!obj.is_object()) throw ConfigError("'model' must be an object");
  reject_unknown_keys(obj, {"model_name", "temperature", "max_tokens", "endpoint_url", "api_key_env", "timeout_seconds"},
                      "model");
  ModelConfig m;
  if (auto v = optional_field<std::string>(obj, "model_name", "model")) m.model_name = *v;
  if (auto v = optional_field<double>(obj, "temperature", "model")) m.temperature = *v;
  if (auto v = optional_field<int>(obj, "max_tokens", "model")) m.max_tokens = *v;
  if (auto v = optional_field<std::string>(obj, "endpoint_url", "model")) m.endpoint_url = *v;
  if (auto v = optional_field<std::string>(obj, "api_key_env", "model")) m.api_key_env = *v;
  if (auto v = optional_field<long>(obj, "timeout_seconds", "model")) m.timeout = std::chrono::seconds(*v);
  try {
    m.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
  return m;
}

MemoryPolicy parse_memory(const json& obj) {
  if (!obj.is_object()) throw ConfigError("'memory' must be an object");
  reject_unknown_keys(obj, {"policy", "k"}, "memory");
  const auto policy = optional_field<std::string>(obj, "policy", "memory").value_or("buffer");
  if (policy == "buffer") return MemoryPolicy::buffer();
  if (policy == "window") {
    const auto k = optional_field<long>(obj, "k", "memory");
    if (!k || *k < 1) throw ConfigError("memory: window policy needs k >= 1");
    return MemoryPolicy::window(static_cast<std::size_t>(*k));
  }
  throw ConfigError("memory: unknown policy '" + policy + "'");
}

}  // namespace

ServiceConfig parse_service_config(const std::string& text, const std::filesystem::path& base_dir) {
  const auto doc = json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw ConfigError("config is not a JSON object");
  reject_unknown_keys(doc,
                      {"host", "port", "model", "memory", "persona_dir", "transcript_dir", "static_dir",
                       "session_ttl_minutes"},
                      "config");

  ServiceConfig cfg;
  if (auto v = optional_field<std::string>(doc, "host", "config")) cfg.host = *v;
  if (auto v = optional_field<int>(doc, "port", "config")) cfg.port = *v;
  if (cfg.port < 0 || cfg.port > 65535) throw ConfigError("port out of range");
  if (auto it = doc.find("model"); it != doc.end()) cfg.model = parse_model(*it);
  if (auto it = doc.find("memory"); it != doc.end()) cfg.memory = parse_memory(*it);
  if (auto v = optional_field<std::string>(doc, "persona_dir", "config")) cfg.persona_dir = resolve(base_dir, *v);
  if (auto v = optional_field<std::string>(doc, "transcript_dir", "config")) {
    cfg.transcript_dir = resolve(base_dir, *v);
  } else if (!base_dir.empty()) {
    cfg.transcript_dir = base_dir / cfg.transcript_dir;
  }
  if (auto v = optional_field<std::string>(doc, "static_dir", "config")) cfg.static_dir = resolve(base_dir, *v);
  if (auto v = optional_field<long>(doc, "session_ttl_minutes", "config")) {
    if (*v < 1) throw ConfigError("session_ttl_minutes must be positive");
    cfg.session_ttl = std::chrono::minutes(*v);
  }
  return cfg;
}

ServiceConfig load_service_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_service_config(buf.str(), path.parent_path());
}

void prepare_directories(const ServiceConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(config.transcript_dir, ec);
  if (ec || !std::filesystem::is_directory(config.transcript_dir)) {
    throw ConfigError("cannot create transcript directory " + config.transcript_dir.string());
  }
  if (config.persona_dir && !std::filesystem::is_directory(*config.persona_dir)) {
    throw ConfigError("persona directory does not exist: " + config.persona_dir->string());
  }
  if (config.static_dir && !std::filesystem::is_directory(*config.static_dir)) {
    throw ConfigError("static directory does not exist: " + config.static_dir->string());
  }
}

}  // namespace mindguide
