#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mindguide/memory.hpp"
#include "mindguide/messages.hpp"

namespace mindguide {

// Transcript files hold one JSON object per line:
//   {"ts":"2024-01-01T00:00:00.000Z","role":"human","content":"..."}
// with role one of "system", "human", "ai".

class TranscriptParseError : public std::runtime_error {
 public:
  TranscriptParseError(std::size_t line, const std::string& what);
  /// 1-based; 0 when the problem is not tied to a line.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

std::string rfc3339_utc(std::chrono::system_clock::time_point tp);

/// One record, without the trailing newline.
std::string encode_transcript_line(const Message& message, std::chrono::system_clock::time_point ts);

/// Throws TranscriptParseError (line number 0).
Message decode_transcript_line(std::string_view line);

/// Parses a whole file. A final record without its newline counts as
/// truncated and is rejected.
std::vector<Message> parse_transcript(std::string_view text);
std::vector<Message> read_transcript(const std::filesystem::path& path);

/// Append-only writer; every record is flushed before append() returns.
class TranscriptWriter {
 public:
  /// Creates the file (and parent directories); existing content is kept.
  /// Throws std::runtime_error if the file cannot be opened.
  explicit TranscriptWriter(std::filesystem::path path);

  void append(const Message& message);
  void append(const Message& message, std::chrono::system_clock::time_point ts);

  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

/// A transcript split into its leading AI welcome (if any) and the
/// human/AI exchanges after it.
struct Conversation {
  std::optional<std::string> welcome;
  std::vector<Exchange> exchanges;
};

/// Throws TranscriptParseError unless `messages` is an optional AI welcome
/// followed by strict (Human, AI) pairs.
Conversation split_conversation(const std::vector<Message>& messages);

/// Rebuilds the memory a session would hold after producing `messages`.
MemoryState replay_into_memory(const std::vector<Message>& messages, std::string memory_key = "history");

}  // namespace mindguide
