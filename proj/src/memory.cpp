#include "mindguide/memory.hpp"

#include <algorithm>
#include <stdexcept>

#include "mindguide/prompting.hpp"

namespace mindguide {

MemoryPolicy MemoryPolicy::window(std::size_t k) {
  if (k < 1) throw std::invalid_argument("window size must be at least 1");
  return MemoryPolicy(Kind::Window, k);
}

MemoryState::MemoryState(std::string memory_key, std::optional<Message> preamble)
    : memory_key_(std::move(memory_key)), preamble_(std::move(preamble)) {
  if (!is_identifier(memory_key_)) {
    throw std::invalid_argument("memory key is not a valid identifier: '" + memory_key_ + "'");
  }
  if (preamble_ && preamble_->role != Role::AI) {
    throw std::invalid_argument("memory preamble must be an AI message");
  }
}

void MemoryState::save(std::string input, std::string output) {
  exchanges_.emplace_back(std::move(input), std::move(output));
}

std::vector<Message> visible_messages(const MemoryState& state, const MemoryPolicy& policy) {
  const auto& all = state.exchanges();
  std::size_t first = 0;
  if (policy.kind() == MemoryPolicy::Kind::Window) {
    first = all.size() - std::min(policy.k(), all.size());
  }

  std::vector<Message> out;
  out.reserve(2 * (all.size() - first) + 1);
  if (state.preamble()) out.push_back(*state.preamble());
  for (auto it = all.begin() + static_cast<std::ptrdiff_t>(first); it != all.end(); ++it) {
    out.push_back(it->human());
    out.push_back(it->ai());
  }
  return out;
}

MemoryVariables load(const MemoryState& state, const MemoryPolicy& policy) {
  return {{state.memory_key(), visible_messages(state, policy)}};
}

}  // namespace mindguide
