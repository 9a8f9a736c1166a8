#include "mindguide/messages.hpp"

#include <gtest/gtest.h>

#include <random>

#include "mindguide/persona.hpp"
#include "support/oracles.hpp"

using namespace mindguide;

TEST(Messages, MakeMessageKeepsRoleAndContent) {
  EXPECT_EQ(make_message(Role::Human, "hi"), (Message{Role::Human, "hi"}));
  EXPECT_EQ(make_message(Role::AI, ""), (Message{Role::AI, ""}));

  const auto& system_text = builtin_mindguide_persona().system_template;
  const auto sys = make_message(Role::System, system_text);
  EXPECT_EQ(sys.role, Role::System);
  EXPECT_EQ(sys.content.rfind("You are a compassionate and experienced mental health therapist", 0), 0u);
}

TEST(Messages, ContentIsNotNormalized) {
  const std::string raw = "  padded\r\n\ttext {with} braces  ";
  EXPECT_EQ(make_message(Role::Human, raw).content, raw);
}

TEST(Messages, RoleTagsRoundTripAndRejectOthers) {
  for (Role r : {Role::System, Role::Human, Role::AI}) EXPECT_EQ(parse_role_tag(role_tag(r)), r);
  for (const char* bad : {"user", "assistant", "Human", "", "tool", "function"}) {
    EXPECT_FALSE(parse_role_tag(bad).has_value()) << bad;
  }
}

TEST(FormatTranscript, EmptyListIsEmptyText) { EXPECT_EQ(format_transcript({}), ""); }

TEST(FormatTranscript, TwoLines) {
  const std::vector<Message> xs{{Role::Human, "hi"}, {Role::AI, "hello"}};
  EXPECT_EQ(format_transcript(xs), "Human: hi\nAI: hello");
}

TEST(FormatTranscript, EmbeddedNewlinesMatchCharacterOracle) {
  const std::vector<Message> xs{{Role::Human, "a\nb"}};
  EXPECT_EQ(format_transcript(xs), support::oracle_format(xs));
  EXPECT_EQ(format_transcript(xs), "Human: a\nb");
}

TEST(FormatTranscript, MissingLabelThrows) {
  const std::vector<Message> xs{{Role::Human, "hi"}, {Role::System, "s"}};
  RoleLabels labels{{Role::Human, "User"}};
  try {
    format_transcript(xs, labels);
    FAIL() << "expected MissingLabel";
  } catch (const MissingLabel& e) {
    EXPECT_EQ(e.role(), Role::System);
  }
  labels[Role::System] = "Sys";
  EXPECT_EQ(format_transcript(xs, labels), "User: hi\nSys: s");
}

TEST(FormatTranscript, ConcatenationProperty) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> len(1, 5);
  std::uniform_int_distribution<int> role(0, 2);
  auto random_list = [&] {
    std::vector<Message> xs(static_cast<std::size_t>(len(rng)));
    for (auto& m : xs) m = Message{static_cast<Role>(role(rng)), support::random_text(rng, 8, true)};
    return xs;
  };
  for (int i = 0; i < 300; ++i) {
    auto xs = random_list();
    auto ys = random_list();
    std::vector<Message> both = xs;
    both.insert(both.end(), ys.begin(), ys.end());
    EXPECT_EQ(format_transcript(both), format_transcript(xs) + "\n" + format_transcript(ys));
    EXPECT_EQ(format_transcript(both), support::oracle_format(both));
  }
}

TEST(Transcript, AppendPreservesEarlierEntries) {
  Transcript t;
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    const std::vector<Message> before(t.messages().begin(), t.messages().end());
    t.append(Message{i % 2 ? Role::AI : Role::Human, support::random_text(rng, 10, true)});
    ASSERT_EQ(t.size(), before.size() + 1);
    EXPECT_TRUE(std::equal(before.begin(), before.end(), t.messages().begin()));
  }
}
