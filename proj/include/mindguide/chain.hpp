#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mindguide/memory.hpp"
#include "mindguide/messages.hpp"
#include "mindguide/model_client.hpp"
#include "mindguide/persona.hpp"
#include "mindguide/prompting.hpp"

namespace mindguide {

/// A template variable the chain has no way to bind.
class UnboundVariable : public std::invalid_argument {
 public:
  explicit UnboundVariable(std::string name);
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class ChainConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ChainOptions {
  std::string input_key{"question"};
  std::string output_key{"reply"};
  std::string memory_key{"history"};
  /// Seeded into memory as an AI preamble, e.g. the persona's welcome.
  std::optional<std::string> preamble;
};

struct ChainOutput {
  Message reply;
  /// Exactly what was sent to the backend.
  std::vector<Message> rendered_prompt;
};

/// Prompt template + chat backend + memory, executed once per user turn.
///
/// A run reads memory, renders the prompt, calls the backend and only then
/// writes the exchange back. History is spliced in as messages between the
/// leading parts and the final Human part, unless some part references the
/// memory key as a variable, in which case it is bound as formatted text.
///
/// Not thread-safe: runs on one chain must be serialized by the caller.
class Chain {
 public:
  /// Throws UnboundVariable for any template variable other than the input
  /// and memory keys, and ChainConfigError when the last part is not a
  /// Human template using the input key exactly once.
  Chain(ChatPromptTemplate prompt, std::shared_ptr<ChatBackend> backend, ModelConfig config,
        MemoryState memory, MemoryPolicy policy, std::string input_key = "question",
        std::string output_key = "reply");

  /// Model errors propagate unchanged and leave memory untouched.
  ChainOutput run(std::string_view input);

  const ChatPromptTemplate& prompt() const noexcept { return prompt_; }
  const ModelConfig& config() const noexcept { return config_; }
  const MemoryState& memory() const noexcept { return memory_; }
  const MemoryPolicy& policy() const noexcept { return policy_; }
  const std::string& input_key() const noexcept { return input_key_; }
  const std::string& output_key() const noexcept { return output_key_; }

 private:
  ChatPromptTemplate prompt_;
  std::shared_ptr<ChatBackend> backend_;
  ModelConfig config_;
  MemoryState memory_;
  MemoryPolicy policy_;
  std::string input_key_;
  std::string output_key_;
  bool history_as_text_{false};
};

/// Builds [System: persona.system_template, Human: persona.human_template]
/// over a fresh memory.
Chain build_chain(const Persona& persona, std::shared_ptr<ChatBackend> backend, ModelConfig config,
                  MemoryPolicy policy, const ChainOptions& options = {});

}  // namespace mindguide
