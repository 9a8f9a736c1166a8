#include "mindguide/chain.hpp"

namespace mindguide {

UnboundVariable::UnboundVariable(std::string name)
    : std::invalid_argument("template variable '" + name + "' is not bound by the chain"),
      name_(std::move(name)) {}

Chain::Chain(ChatPromptTemplate prompt, std::shared_ptr<ChatBackend> backend, ModelConfig config,
             MemoryState memory, MemoryPolicy policy, std::string input_key, std::string output_key)
    : prompt_(std::move(prompt)),
      backend_(std::move(backend)),
      config_(std::move(config)),
      memory_(std::move(memory)),
      policy_(policy),
      input_key_(std::move(input_key)),
      output_key_(std::move(output_key)) {
  if (!backend_) throw ChainConfigError("chain needs a backend");
  if (!is_identifier(input_key_)) throw ChainConfigError("input key is not an identifier: " + input_key_);
  if (!is_identifier(output_key_)) throw ChainConfigError("output key is not an identifier: " + output_key_);
  if (input_key_ == memory_.memory_key()) throw ChainConfigError("input key and memory key must differ");
  config_.validate();

  for (const auto& var : prompt_.variables()) {
    if (var == input_key_) continue;
    if (var == memory_.memory_key()) {
      history_as_text_ = true;
      continue;
    }
    throw UnboundVariable(var);
  }

  const auto& last = prompt_.parts().back();
  if (last.role != Role::Human) throw ChainConfigError("last prompt part must be a Human template");
  if (last.prompt.occurrences(input_key_) != 1) {
    throw ChainConfigError("Human template must contain {" + input_key_ + "} exactly once");
  }
}

ChainOutput Chain::run(std::string_view input) {
  auto history = visible_messages(memory_, policy_);

  Bindings bindings{{input_key_, std::string(input)}};
  if (history_as_text_) bindings.emplace(memory_.memory_key(), format_transcript(history));

  auto rendered = prompt_.render(bindings);
  std::vector<Message> messages;
  messages.reserve(rendered.size() + (history_as_text_ ? 0 : history.size()));
  messages.insert(messages.end(), std::make_move_iterator(rendered.begin()),
                  std::make_move_iterator(rendered.end() - 1));
  if (!history_as_text_) {
    messages.insert(messages.end(), std::make_move_iterator(history.begin()),
                    std::make_move_iterator(history.end()));
  }
  messages.push_back(std::move(rendered.back()));

  CompletionRequest request(config_, std::move(messages));
  Message reply = backend_->complete(request);
  reply.role = Role::AI;

  memory_.save(std::string(input), reply.content);
  return ChainOutput{std::move(reply), request.messages()};
}

Chain build_chain(const Persona& persona, std::shared_ptr<ChatBackend> backend, ModelConfig config,
                  MemoryPolicy policy, const ChainOptions& options) {
  ChatPromptTemplate prompt({
      MessageTemplate{Role::System, parse_template(persona.system_template)},
      MessageTemplate{Role::Human, parse_template(persona.human_template)},
  });
  std::optional<Message> preamble;
  if (options.preamble) preamble = Message{Role::AI, *options.preamble};
  return Chain(std::move(prompt), std::move(backend), std::move(config),
               MemoryState(options.memory_key, std::move(preamble)), policy, options.input_key,
               options.output_key);
}

}  // namespace mindguide
