#include "mindguide/messages.hpp"

namespace mindguide {

std::string_view role_tag(Role role) noexcept {
  switch (role) {
    case Role::System:
      return "system";
    case Role::Human:
      return "human";
    case Role::AI:
      return "ai";
  }
  return "human";
}

std::optional<Role> parse_role_tag(std::string_view tag) noexcept {
  if (tag == "system") return Role::System;
  if (tag == "human") return Role::Human;
  if (tag == "ai") return Role::AI;
  return std::nullopt;
}

const RoleLabels& default_role_labels() {
  static const RoleLabels labels{
      {Role::System, "System"}, {Role::Human, "Human"}, {Role::AI, "AI"}};
  return labels;
}

MissingLabel::MissingLabel(Role role)
    : std::invalid_argument("no label for role '" + std::string(role_tag(role)) + "'"),
      role_(role) {}

std::string format_transcript(std::span<const Message> messages, const RoleLabels& labels) {
  std::string out;
  bool first = true;
  for (const auto& msg : messages) {
    auto it = labels.find(msg.role);
    if (it == labels.end()) throw MissingLabel(msg.role);
    if (!first) out.push_back('\n');
    first = false;
    out += it->second;
    out += ": ";
    out += msg.content;
  }
  return out;
}

}  // namespace mindguide
