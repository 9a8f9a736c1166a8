#include "mindguide/memory.hpp"

#include <gtest/gtest.h>

#include <random>

#include "support/oracles.hpp"

using namespace mindguide;

TEST(Memory, FreshBufferIsEmpty) {
  MemoryState state;
  EXPECT_EQ(load(state, MemoryPolicy::buffer()), (MemoryVariables{{"history", {}}}));
}

TEST(Memory, SingleExchange) {
  MemoryState state;
  state.save("hi", "hello");
  const std::vector<Message> expected{{Role::Human, "hi"}, {Role::AI, "hello"}};
  EXPECT_EQ(load(state, MemoryPolicy::buffer()).at("history"), expected);
}

TEST(Memory, WindowOneShowsOnlyLastExchange) {
  MemoryState state;
  state.save("q1", "a1");
  state.save("q2", "a2");
  const auto got = load(state, MemoryPolicy::window(1)).at("history");
  EXPECT_EQ(got, support::oracle_window(std::nullopt, {{"q1", "a1"}, {"q2", "a2"}}, 1));
  EXPECT_EQ(got, (std::vector<Message>{{Role::Human, "q2"}, {Role::AI, "a2"}}));
}

TEST(Memory, WindowDoesNotTruncateStorage) {
  MemoryState state;
  for (int i = 0; i < 5; ++i) state.save("in" + std::to_string(i), "out" + std::to_string(i));
  EXPECT_EQ(state.exchanges().size(), 5u);
  EXPECT_EQ(load(state, MemoryPolicy::window(2)).at("history").size(), 4u);
  EXPECT_EQ(state.exchanges().size(), 5u);
}

TEST(Memory, WindowRequiresPositiveK) {
  EXPECT_THROW(MemoryPolicy::window(0), std::invalid_argument);
  EXPECT_EQ(MemoryPolicy::window(3).k(), 3u);
}

TEST(Memory, CustomKeyAndPreamble) {
  MemoryState state("chat_log", Message{Role::AI, "welcome"});
  state.save("a", "b");
  const auto vars = load(state, MemoryPolicy::window(1));
  ASSERT_TRUE(vars.contains("chat_log"));
  EXPECT_EQ(vars.at("chat_log").front(), (Message{Role::AI, "welcome"}));
  EXPECT_THROW(MemoryState("not valid"), std::invalid_argument);
  EXPECT_THROW(MemoryState("history", Message{Role::Human, "x"}), std::invalid_argument);
}

TEST(Memory, ClearKeepsPreambleAndIsIdempotent) {
  MemoryState with("history", Message{Role::AI, "w"});
  with.save("a", "b");
  with.clear();
  EXPECT_EQ(load(with, MemoryPolicy::buffer()).at("history"), (std::vector<Message>{{Role::AI, "w"}}));
  const auto once = with;
  with.clear();
  EXPECT_EQ(with, once);

  MemoryState without;
  without.save("a", "b");
  without.clear();
  EXPECT_TRUE(load(without, MemoryPolicy::buffer()).at("history").empty());
  without.save("a", "b");
  EXPECT_EQ(without.exchanges().size(), 1u);
}

TEST(Memory, RandomizedAgainstOracles) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> n_saves(0, 12);
  std::uniform_int_distribution<std::size_t> k_dist(1, 6);
  std::bernoulli_distribution has_preamble(0.5);
  for (int trial = 0; trial < 500; ++trial) {
    std::optional<Message> preamble;
    if (has_preamble(rng)) preamble = Message{Role::AI, support::random_text(rng, 6, true)};
    MemoryState state("history", preamble);
    std::vector<std::pair<std::string, std::string>> saved;
    const int n = n_saves(rng);
    for (int i = 0; i < n; ++i) {
      saved.emplace_back(support::random_text(rng, 6, true), support::random_text(rng, 6, true));
      const auto before = state.exchanges();
      state.save(saved.back().first, saved.back().second);
      // Append-only: earlier exchanges are untouched.
      ASSERT_TRUE(std::equal(before.begin(), before.end(), state.exchanges().begin()));
    }
    ASSERT_EQ(state.exchanges().size(), saved.size());

    const auto buffered = load(state, MemoryPolicy::buffer()).at("history");
    EXPECT_EQ(buffered.size(), 2 * saved.size() + (preamble ? 1 : 0));
    EXPECT_EQ(buffered, support::oracle_window(preamble, saved, std::nullopt));

    const auto k = k_dist(rng);
    EXPECT_EQ(load(state, MemoryPolicy::window(k)).at("history"), support::oracle_window(preamble, saved, k));

    // Reading never changes what later reads see.
    EXPECT_EQ(load(state, MemoryPolicy::buffer()).at("history"), buffered);
  }
}
