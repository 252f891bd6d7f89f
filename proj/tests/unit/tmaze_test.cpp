#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "aif/errors.hpp"
#include "aif/tmaze.hpp"

namespace aif::tmaze {
namespace {

TEST(Indices, RoundTrip) {
  for (Index s = 0; s < kNumStates; ++s) EXPECT_EQ(state_index(location_of(s), context_of(s)), s);
  EXPECT_EQ(state_index(Location::Cue, Context::Black), 7u);
  EXPECT_EQ(cheese_arm(Context::White), Location::Left);
  EXPECT_EQ(cheese_arm(Context::Black), Location::Right);
}

TEST(Model, Contingencies) {
  const auto m = build_tmaze_model();
  EXPECT_EQ(m.likelihood(outcome::kLeftCheese, state_index(Location::Left, Context::White)), 0.98);
  EXPECT_EQ(m.likelihood(outcome::kLeftNull, state_index(Location::Left, Context::White)), 1.0 - 0.98);
  EXPECT_EQ(m.likelihood(outcome::kLeftNull, state_index(Location::Left, Context::Black)), 0.98);
  EXPECT_EQ(m.likelihood(outcome::kRightCheese, state_index(Location::Right, Context::Black)), 0.98);
  EXPECT_EQ(m.likelihood(outcome::kCueBlack, state_index(Location::Cue, Context::Black)), 1.0);
  // Arms are absorbing under every action.
  for (Index u = 0; u < kNumActions; ++u) {
    const Index left = state_index(Location::Left, Context::Black);
    EXPECT_EQ(m.transitions[u](left, left), 1.0);
  }
  EXPECT_EQ(m.transitions[3](state_index(Location::Cue, Context::White), state_index(Location::Center, Context::White)),
            1.0);
  EXPECT_EQ(m.preferences, (std::vector<double>{0, 6, -6, 6, -6, 0, 0}));
  EXPECT_EQ(m.policies.size(), 10u);
  EXPECT_EQ(m.policies[4].actions, (std::vector<Index>{1, 1}));
}

TEST(Schedule, Standard) {
  const auto s = ContextSchedule::standard();
  ASSERT_EQ(s.size(), 50u);
  const std::vector<std::pair<std::size_t, std::size_t>> bands{{10, 12}, {30, 30}};
  EXPECT_EQ(s.black_bands(), bands);
  EXPECT_EQ(context_at(s, 1), Context::White);
  EXPECT_EQ(context_at(s, 11), Context::Black);
  EXPECT_THROW(context_at(s, 0), InvalidInputError);
  EXPECT_THROW(context_at(s, 51), InvalidInputError);
}

TEST(Schedule, FromFile) {
  const auto path = std::filesystem::temp_directory_path() / "aif_schedule_test.txt";
  {
    std::ofstream f(path);
    f << "# three trials\nwhite\n1\n\nblack  # trailing\n";
  }
  const auto s = ContextSchedule::from_file(path);
  EXPECT_EQ(s.contexts(), (std::vector<Context>{Context::White, Context::Black, Context::Black}));
  {
    std::ofstream f(path);
    f << "grey\n";
  }
  EXPECT_THROW(ContextSchedule::from_file(path), Error);
  EXPECT_THROW(ContextSchedule::from_file(path.string() + ".missing"), IoError);
}

TEST(Env, MovesAndAbsorbs) {
  TmazeEnv env(Context::White, 3);
  EXPECT_EQ(env.observe(), outcome::kCenter);
  EXPECT_EQ(env.step(3), outcome::kCueWhite);
  const Index o = env.step(2);
  EXPECT_TRUE(o == outcome::kRightCheese || o == outcome::kRightNull);
  env.step(0);
  EXPECT_EQ(env.location(), Location::Right);
  env.reset(Context::Black, 3);
  EXPECT_EQ(env.location(), Location::Center);
  EXPECT_EQ(env.step(3), outcome::kCueBlack);
}

TEST(Env, RewardFrequency) {
  TmazeEnv env(Context::White, 7);
  int cheese = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    env.reset(Context::White, 7 + static_cast<std::uint64_t>(i));
    cheese += env.step(1) == outcome::kLeftCheese;
  }
  EXPECT_NEAR(static_cast<double>(cheese) / n, 0.98, 0.005);
}

TEST(Env, SeededStreamsRepeat) {
  TmazeEnv a(Context::Black, 99), b(Context::Black, 99);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(a.step(1), b.step(1));
}

TEST(Score, Outcomes) {
  EXPECT_EQ(score_outcome(outcome::kLeftCheese), 6);
  EXPECT_EQ(score_outcome(outcome::kRightNull), -6);
  EXPECT_EQ(score_outcome(outcome::kCueBlack), 0);
  EXPECT_EQ(score_outcome(outcome::kCenter), 0);
}

}  // namespace
}  // namespace aif::tmaze
