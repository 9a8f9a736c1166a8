#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mindguide {

/// The assistant's configured identity. Templates are source text in the
/// `{name}` placeholder syntax.
struct Persona {
  std::string id;
  std::string system_template;
  std::string human_template;
  std::string welcome;

  friend bool operator==(const Persona&, const Persona&) = default;
};

class PersonaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses {id, system_template, human_template, welcome}. Both templates
/// must be syntactically valid. Throws PersonaError.
Persona parse_persona_json(const std::string& text);
Persona load_persona_file(const std::filesystem::path& path);

/// The "mindguide" persona compiled into the library.
const Persona& builtin_mindguide_persona();

inline constexpr const char* kDefaultPersonaId = "mindguide";

class PersonaRegistry {
 public:
  /// Registry holding just the built-in persona.
  PersonaRegistry();

  /// Built-in persona plus every *.json file in `dir`; a file whose id is
  /// "mindguide" replaces the built-in one. Throws PersonaError.
  static PersonaRegistry from_directory(const std::filesystem::path& dir);

  void add(Persona persona);
  const Persona* find(const std::string& id) const;
  std::vector<std::string> ids() const;

 private:
  std::map<std::string, Persona> personas_;
};

}  // namespace mindguide
