// mindguide: run the chat service, chat in a terminal, or replay transcripts.

#include <unistd.h>

#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "mindguide/cli.hpp"
#include "mindguide/persona.hpp"
#include "mindguide/service_config.hpp"

namespace {

using namespace mindguide;

struct Common {
  std::string config_path;
  std::string persona_id{kDefaultPersonaId};
  std::string backend{"remote"};
  std::string script_path;
};

ServiceConfig resolve_config(const std::string& path) {
  if (!path.empty()) return load_service_config(path);
  if (const char* env = std::getenv(kConfigEnvVar); env != nullptr && *env != '\0') {
    return load_service_config(env);
  }
  return ServiceConfig{};
}

std::shared_ptr<ChatBackend> make_backend(const Common& c) {
  if (c.backend == "scripted") {
    if (c.script_path.empty()) throw cli::ScriptError("--backend scripted requires --script");
    return std::make_shared<ScriptedBackend>(cli::load_script(c.script_path));
  }
  return std::make_shared<RemoteBackend>();
}

Persona resolve_persona(const ServiceConfig& cfg, const std::string& id) {
  auto registry = cfg.persona_dir ? PersonaRegistry::from_directory(*cfg.persona_dir) : PersonaRegistry{};
  const Persona* p = registry.find(id);
  if (p == nullptr) throw PersonaError("unknown persona '" + id + "'");
  return *p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MindGuide conversational assistant"};
  app.require_subcommand(1);

  Common common;
  int port = -1;
  std::string transcript_out;
  std::string replay_transcript;

  auto add_common = [&](CLI::App* sub, bool with_backend) {
    sub->add_option("--config", common.config_path, "Service config file (JSON); defaults to $MINDGUIDE_CONFIG");
    sub->add_option("--persona", common.persona_id, "Persona id")->capture_default_str();
    if (with_backend) {
      sub->add_option("--backend", common.backend, "Model backend")
          ->check(CLI::IsMember({"remote", "scripted"}))
          ->capture_default_str();
    }
    sub->add_option("--script", common.script_path, "JSON array of scripted replies");
  };

  auto* serve = app.add_subcommand("serve", "Run the HTTP chat service");
  add_common(serve, true);
  serve->add_option("--port", port, "Override the configured port")->check(CLI::Range(0, 65535));

  auto* chat = app.add_subcommand("chat", "Chat in the terminal");
  add_common(chat, true);
  chat->add_option("--transcript", transcript_out, "Write the conversation to this transcript file");

  auto* replay = app.add_subcommand("replay", "Re-run a transcript against a script and diff the replies");
  add_common(replay, false);
  replay->add_option("transcript", replay_transcript, "Transcript file (JSON lines)")->required();
  replay->get_option("--script")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kSuccess : cli::kUsageError;
  }

  try {
    ServiceConfig cfg = resolve_config(common.config_path);

    if (serve->parsed()) {
      if (port >= 0) cfg.port = port;
      return cli::run_serve(cfg, make_backend(common), std::cerr);
    }

    if (chat->parsed()) {
      cli::ChatOptions opts{resolve_persona(cfg, common.persona_id), make_backend(common), cfg.model, cfg.memory,
                            std::nullopt, isatty(STDIN_FILENO) != 0};
      if (!transcript_out.empty()) opts.transcript = transcript_out;
      return cli::run_chat(opts, std::cin, std::cout, std::cerr);
    }

    cli::ReplayOptions opts{replay_transcript, cli::load_script(common.script_path),
                            resolve_persona(cfg, common.persona_id), cfg.model, cfg.memory};
    return cli::run_replay(opts, std::cout, std::cerr);
  } catch (const ConfigError& e) {
    std::cerr << "config: " << e.what() << '\n';
  } catch (const PersonaError& e) {
    std::cerr << "persona: " << e.what() << '\n';
  } catch (const cli::ScriptError& e) {
    std::cerr << "script: " << e.what() << '\n';
  }
  return cli::kUsageError;
}
