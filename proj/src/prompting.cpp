#include "mindguide/prompting.hpp"

#include <algorithm>

namespace mindguide {

namespace {

bool is_ident_start(char c) noexcept {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}

bool is_ident_char(char c) noexcept { return is_ident_start(c) || (c >= '0' && c <= '9'); }

}  // namespace

bool is_identifier(std::string_view name) noexcept {
  if (name.empty() || !is_ident_start(name.front())) return false;
  return std::all_of(name.begin() + 1, name.end(), is_ident_char);
}

TemplateSyntaxError::TemplateSyntaxError(Kind kind, std::size_t offset, const std::string& what)
    : std::invalid_argument(what + " at offset " + std::to_string(offset)),
      kind_(kind),
      offset_(offset) {}

MissingVariable::MissingVariable(std::string name)
    : std::invalid_argument("missing template variable '" + name + "'"), name_(std::move(name)) {}

PromptTemplate PromptTemplate::parse(std::string source) {
  PromptTemplate tpl;
  std::string literal;
  const std::string_view src = source;
  std::size_t i = 0;

  auto flush_literal = [&] {
    if (!literal.empty()) {
      tpl.segments_.emplace_back(std::move(literal));
      literal.clear();
    }
  };

  while (i < src.size()) {
    const char c = src[i];
    if (c == '{') {
      if (i + 1 < src.size() && src[i + 1] == '{') {
        literal.push_back('{');
        i += 2;
        continue;
      }
      const auto close = src.find('}', i + 1);
      if (close == std::string_view::npos) {
        throw TemplateSyntaxError(TemplateSyntaxError::Kind::UnbalancedBrace, i,
                                  "unclosed '{'");
      }
      const auto name = src.substr(i + 1, close - i - 1);
      if (name.empty()) {
        throw TemplateSyntaxError(TemplateSyntaxError::Kind::EmptyPlaceholder, i,
                                  "empty placeholder '{}'");
      }
      if (!is_identifier(name)) {
        throw TemplateSyntaxError(TemplateSyntaxError::Kind::MalformedIdentifier, i + 1,
                                  "malformed placeholder name '" + std::string(name) + "'");
      }
      flush_literal();
      tpl.segments_.emplace_back(Placeholder{std::string(name)});
      tpl.variables_.emplace(name);
      i = close + 1;
    } else if (c == '}') {
      if (i + 1 < src.size() && src[i + 1] == '}') {
        literal.push_back('}');
        i += 2;
        continue;
      }
      throw TemplateSyntaxError(TemplateSyntaxError::Kind::UnbalancedBrace, i,
                                "unmatched '}'");
    } else {
      literal.push_back(c);
      ++i;
    }
  }
  flush_literal();
  tpl.source_ = std::move(source);
  return tpl;
}

std::size_t PromptTemplate::occurrences(std::string_view name) const noexcept {
  return static_cast<std::size_t>(std::count_if(segments_.begin(), segments_.end(), [&](const Segment& s) {
    const auto* ph = std::get_if<Placeholder>(&s);
    return ph != nullptr && ph->name == name;
  }));
}

std::string PromptTemplate::render(const Bindings& bindings) const {
  std::string out;
  out.reserve(source_.size());
  for (const auto& seg : segments_) {
    if (const auto* text = std::get_if<std::string>(&seg)) {
      out += *text;
      continue;
    }
    const auto& name = std::get<Placeholder>(seg).name;
    auto it = bindings.find(name);
    if (it == bindings.end()) throw MissingVariable(name);
    out += it->second;
  }
  return out;
}

ChatPromptTemplate::ChatPromptTemplate(std::vector<MessageTemplate> parts) : parts_(std::move(parts)) {
  if (parts_.empty()) throw std::invalid_argument("chat prompt template needs at least one part");
  for (const auto& part : parts_) {
    variables_.insert(part.prompt.variables().begin(), part.prompt.variables().end());
  }
}

std::vector<Message> ChatPromptTemplate::render(const Bindings& bindings) const {
  std::vector<Message> out;
  out.reserve(parts_.size());
  for (const auto& part : parts_) out.push_back(Message{part.role, part.prompt.render(bindings)});
  return out;
}

}  // namespace mindguide
