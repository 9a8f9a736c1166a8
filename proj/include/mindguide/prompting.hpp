#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mindguide/messages.hpp"

namespace mindguide {

using Bindings = std::map<std::string, std::string, std::less<>>;

/// True when `name` matches [A-Za-z_][A-Za-z0-9_]*.
bool is_identifier(std::string_view name) noexcept;

class TemplateSyntaxError : public std::invalid_argument {
 public:
  enum class Kind { UnbalancedBrace, EmptyPlaceholder, MalformedIdentifier };

  TemplateSyntaxError(Kind kind, std::size_t offset, const std::string& what);
  Kind kind() const noexcept { return kind_; }
  /// Byte offset into the source where the problem starts.
  std::size_t offset() const noexcept { return offset_; }

 private:
  Kind kind_;
  std::size_t offset_;
};

class MissingVariable : public std::invalid_argument {
 public:
  explicit MissingVariable(std::string name);
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// Text with `{name}` placeholders. `{{` and `}}` stand for literal braces.
class PromptTemplate {
 public:
  struct Placeholder {
    std::string name;
    friend bool operator==(const Placeholder&, const Placeholder&) = default;
  };
  using Segment = std::variant<std::string, Placeholder>;

  /// Throws TemplateSyntaxError.
  static PromptTemplate parse(std::string source);

  const std::string& source() const noexcept { return source_; }
  const std::set<std::string, std::less<>>& variables() const noexcept { return variables_; }
  const std::vector<Segment>& segments() const noexcept { return segments_; }

  /// How many times `name` appears as a placeholder.
  std::size_t occurrences(std::string_view name) const noexcept;

  /// Substitutes every placeholder. Binding values are inserted verbatim and
  /// never re-scanned; bindings not named by the template are ignored.
  /// Throws MissingVariable.
  std::string render(const Bindings& bindings) const;

 private:
  PromptTemplate() = default;

  std::string source_;
  std::vector<Segment> segments_;
  std::set<std::string, std::less<>> variables_;
};

inline PromptTemplate parse_template(std::string source) {
  return PromptTemplate::parse(std::move(source));
}

struct MessageTemplate {
  Role role;
  PromptTemplate prompt;
};

/// Ordered, role-tagged templates rendered into a message list.
class ChatPromptTemplate {
 public:
  /// Throws std::invalid_argument when `parts` is empty.
  explicit ChatPromptTemplate(std::vector<MessageTemplate> parts);

  const std::vector<MessageTemplate>& parts() const noexcept { return parts_; }
  const std::set<std::string, std::less<>>& variables() const noexcept { return variables_; }

  /// One message per part, in order, all rendered against the same bindings.
  std::vector<Message> render(const Bindings& bindings) const;

 private:
  std::vector<MessageTemplate> parts_;
  std::set<std::string, std::less<>> variables_;
};

inline std::vector<Message> render_chat(const ChatPromptTemplate& chat, const Bindings& bindings) {
  return chat.render(bindings);
}

}  // namespace mindguide
