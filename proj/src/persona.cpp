#include "mindguide/persona.hpp"

#include <fstream>
#include <sstream>

#include "builtin_persona.hpp"
#include "json.hpp"
#include "mindguide/prompting.hpp"

namespace mindguide {

namespace {

std::string required_string(const nlohmann::json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end() || !it->is_string()) {
    throw PersonaError(std::string("persona field '") + key + "' missing or not a string");
  }
  return it->get<std::string>();
}

}  // namespace

Persona parse_persona_json(const std::string& text) {
  const auto doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw PersonaError("persona is not a JSON object");

  Persona p{required_string(doc, "id"), required_string(doc, "system_template"),
            required_string(doc, "human_template"), required_string(doc, "welcome")};
  if (p.id.empty()) throw PersonaError("persona id must not be empty");
  try {
    (void)parse_template(p.system_template);
    (void)parse_template(p.human_template);
  } catch (const TemplateSyntaxError& e) {
    throw PersonaError("persona '" + p.id + "': " + e.what());
  }
  return p;
}

Persona load_persona_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PersonaError("cannot open persona file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_persona_json(buf.str());
  } catch (const PersonaError& e) {
    throw PersonaError(path.string() + ": " + e.what());
  }
}

const Persona& builtin_mindguide_persona() {
  static const Persona persona = parse_persona_json(detail::kBuiltinPersonaJson);
  return persona;
}

PersonaRegistry::PersonaRegistry() { add(builtin_mindguide_persona()); }

PersonaRegistry PersonaRegistry::from_directory(const std::filesystem::path& dir) {
  PersonaRegistry reg;
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw PersonaError("persona directory does not exist: " + dir.string());
  }
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      reg.add(load_persona_file(entry.path()));
    }
  }
  return reg;
}

void PersonaRegistry::add(Persona persona) {
  auto id = persona.id;
  personas_.insert_or_assign(std::move(id), std::move(persona));
}

const Persona* PersonaRegistry::find(const std::string& id) const {
  auto it = personas_.find(id);
  return it == personas_.end() ? nullptr : &it->second;
}

std::vector<std::string> PersonaRegistry::ids() const {
  std::vector<std::string> out;
  for (const auto& [id, _] : personas_) out.push_back(id);
  return out;
}

}  // namespace mindguide
