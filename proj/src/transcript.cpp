#include "mindguide/transcript.hpp"

#include <ctime>
#include <regex>
#include <sstream>

#include "json.hpp"

namespace mindguide {

TranscriptParseError::TranscriptParseError(std::size_t line, const std::string& what)
    : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

std::string rfc3339_utc(std::chrono::system_clock::time_point tp) {
  using namespace std::chrono;
  const auto ms = duration_cast<milliseconds>(tp.time_since_epoch()).count();
  std::time_t secs = static_cast<std::time_t>(ms / 1000);
  long millis = static_cast<long>(ms % 1000);
  if (millis < 0) {
    millis += 1000;
    --secs;
  }
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[32];
  const auto n = std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[48];
  std::snprintf(out, sizeof out, "%.*s.%03ldZ", static_cast<int>(n), buf, millis);
  return out;
}

std::string encode_transcript_line(const Message& message, std::chrono::system_clock::time_point ts) {
  nlohmann::ordered_json rec;
  rec["ts"] = rfc3339_utc(ts);
  rec["role"] = role_tag(message.role);
  rec["content"] = message.content;
  return rec.dump();
}

Message decode_transcript_line(std::string_view line) {
  static const std::regex rfc3339(
      R"(^\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}(\.\d+)?(Z|[+-]\d{2}:\d{2})$)");

  const auto rec = nlohmann::json::parse(line, nullptr, false);
  if (rec.is_discarded() || !rec.is_object()) throw TranscriptParseError(0, "record is not a JSON object");

  const auto ts = rec.find("ts");
  if (ts == rec.end() || !ts->is_string() || !std::regex_match(ts->get_ref<const std::string&>(), rfc3339)) {
    throw TranscriptParseError(0, "record has no RFC 3339 'ts'");
  }
  const auto role = rec.find("role");
  if (role == rec.end() || !role->is_string()) throw TranscriptParseError(0, "record has no 'role'");
  const auto parsed_role = parse_role_tag(role->get_ref<const std::string&>());
  if (!parsed_role) throw TranscriptParseError(0, "unknown role '" + role->get<std::string>() + "'");
  const auto content = rec.find("content");
  if (content == rec.end() || !content->is_string()) throw TranscriptParseError(0, "record has no 'content'");

  return Message{*parsed_role, content->get<std::string>()};
}

std::vector<Message> parse_transcript(std::string_view text) {
  std::vector<Message> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    ++line_no;
    const auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) throw TranscriptParseError(line_no, "truncated record (no trailing newline)");
    try {
      out.push_back(decode_transcript_line(text.substr(pos, nl - pos)));
    } catch (const TranscriptParseError& e) {
      throw TranscriptParseError(line_no, e.what());
    }
    pos = nl + 1;
  }
  return out;
}

std::vector<Message> read_transcript(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TranscriptParseError(0, "cannot open transcript " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_transcript(buf.str());
}

TranscriptWriter::TranscriptWriter(std::filesystem::path path) : path_(std::move(path)) {
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  out_.open(path_, std::ios::binary | std::ios::app);
  if (!out_) throw std::runtime_error("cannot open transcript for writing: " + path_.string());
}

void TranscriptWriter::append(const Message& message) {
  append(message, std::chrono::system_clock::now());
}

void TranscriptWriter::append(const Message& message, std::chrono::system_clock::time_point ts) {
  out_ << encode_transcript_line(message, ts) << '\n';
  out_.flush();
  if (!out_) throw std::runtime_error("failed writing transcript " + path_.string());
}

Conversation split_conversation(const std::vector<Message>& messages) {
  Conversation conv;
  std::size_t i = 0;
  if (!messages.empty() && messages.front().role == Role::AI) {
    conv.welcome = messages.front().content;
    i = 1;
  }
  for (; i < messages.size(); i += 2) {
    if (messages[i].role != Role::Human) {
      throw TranscriptParseError(i + 1, "expected a human message");
    }
    if (i + 1 >= messages.size()) throw TranscriptParseError(i + 1, "human message has no AI reply");
    if (messages[i + 1].role != Role::AI) throw TranscriptParseError(i + 2, "expected an AI message");
    conv.exchanges.emplace_back(messages[i].content, messages[i + 1].content);
  }
  return conv;
}

MemoryState replay_into_memory(const std::vector<Message>& messages, std::string memory_key) {
  auto conv = split_conversation(messages);
  std::optional<Message> preamble;
  if (conv.welcome) preamble = Message{Role::AI, *conv.welcome};
  MemoryState state(std::move(memory_key), std::move(preamble));
  for (const auto& ex : conv.exchanges) state.save(ex.human().content, ex.ai().content);
  return state;
}

}  // namespace mindguide
