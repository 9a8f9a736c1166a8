#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mindguide/messages.hpp"

namespace mindguide {

/// One human turn and the AI reply to it.
class Exchange {
 public:
  Exchange(std::string input, std::string output)
      : human_{Role::Human, std::move(input)}, ai_{Role::AI, std::move(output)} {}

  const Message& human() const noexcept { return human_; }
  const Message& ai() const noexcept { return ai_; }

  friend bool operator==(const Exchange&, const Exchange&) = default;

 private:
  Message human_;
  Message ai_;
};

/// How stored exchanges are exposed on read. Storage is never truncated;
/// a window only limits what load() returns.
class MemoryPolicy {
 public:
  enum class Kind { Buffer, Window };

  static MemoryPolicy buffer() noexcept { return MemoryPolicy(Kind::Buffer, 0); }
  /// Throws std::invalid_argument when k < 1.
  static MemoryPolicy window(std::size_t k);

  Kind kind() const noexcept { return kind_; }
  /// Window size; zero for Buffer.
  std::size_t k() const noexcept { return k_; }

  friend bool operator==(const MemoryPolicy&, const MemoryPolicy&) = default;

 private:
  MemoryPolicy(Kind kind, std::size_t k) noexcept : kind_(kind), k_(k) {}

  Kind kind_;
  std::size_t k_;
};

using MemoryVariables = std::map<std::string, std::vector<Message>>;

class MemoryState {
 public:
  /// Throws std::invalid_argument if `memory_key` is not an identifier or
  /// the preamble is not an AI message.
  explicit MemoryState(std::string memory_key = "history", std::optional<Message> preamble = std::nullopt);

  const std::string& memory_key() const noexcept { return memory_key_; }
  const std::optional<Message>& preamble() const noexcept { return preamble_; }
  const std::vector<Exchange>& exchanges() const noexcept { return exchanges_; }

  /// Appends one exchange. Earlier exchanges are never touched.
  void save(std::string input, std::string output);

  /// Drops every exchange but keeps the preamble.
  void clear() noexcept { exchanges_.clear(); }

  friend bool operator==(const MemoryState&, const MemoryState&) = default;

 private:
  std::string memory_key_;
  std::optional<Message> preamble_;
  std::vector<Exchange> exchanges_;
};

/// The messages a run should see, keyed by the state's memory_key:
/// preamble first, then the visible exchanges flattened human-then-ai.
MemoryVariables load(const MemoryState& state, const MemoryPolicy& policy);

/// load() without the map wrapper.
std::vector<Message> visible_messages(const MemoryState& state, const MemoryPolicy& policy);

}  // namespace mindguide
