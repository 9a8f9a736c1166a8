#pragma once

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mindguide {

enum class Role { System, Human, AI };

/// Canonical lowercase tag ("system", "human", "ai") used by transcripts.
std::string_view role_tag(Role role) noexcept;

/// Inverse of role_tag. Returns nullopt for anything but the three tags.
std::optional<Role> parse_role_tag(std::string_view tag) noexcept;

struct Message {
  Role role{Role::Human};
  std::string content;

  friend bool operator==(const Message&, const Message&) = default;
};

inline Message make_message(Role role, std::string content) {
  return Message{role, std::move(content)};
}

/// Append-only ordered record of messages.
class Transcript {
 public:
  Transcript() = default;
  explicit Transcript(std::vector<Message> messages) : messages_(std::move(messages)) {}

  void append(Message message) { messages_.push_back(std::move(message)); }

  std::span<const Message> messages() const noexcept { return messages_; }
  std::size_t size() const noexcept { return messages_.size(); }
  bool empty() const noexcept { return messages_.empty(); }

  friend bool operator==(const Transcript&, const Transcript&) = default;

 private:
  std::vector<Message> messages_;
};

using RoleLabels = std::map<Role, std::string>;

/// {"System", "Human", "AI"}
const RoleLabels& default_role_labels();

class MissingLabel : public std::invalid_argument {
 public:
  explicit MissingLabel(Role role);
  Role role() const noexcept { return role_; }

 private:
  Role role_;
};

/// One "<label>: <content>" line per message, newline-joined. Content is
/// copied verbatim, so embedded newlines survive.
std::string format_transcript(std::span<const Message> messages,
                              const RoleLabels& labels = default_role_labels());

}  // namespace mindguide
