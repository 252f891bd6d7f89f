#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "aif/errors.hpp"
#include "aif/model.hpp"
#include "aif/tmaze.hpp"
#include "../support/oracle.hpp"

namespace aif {
namespace {

namespace fs = std::filesystem;

fs::path temp_path(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "aif_model_test";
  fs::create_directories(dir);
  return dir / name;
}

void expect_models_equal(const GenerativeModel& a, const GenerativeModel& b, double tol) {
  ASSERT_EQ(a.num_states, b.num_states);
  ASSERT_EQ(a.num_outcomes, b.num_outcomes);
  ASSERT_EQ(a.num_actions, b.num_actions);
  ASSERT_EQ(a.horizon, b.horizon);
  ASSERT_EQ(a.likelihood.data.size(), b.likelihood.data.size());
  for (std::size_t i = 0; i < a.likelihood.data.size(); ++i) EXPECT_NEAR(a.likelihood.data[i], b.likelihood.data[i], tol);
  ASSERT_EQ(a.transitions.size(), b.transitions.size());
  for (std::size_t u = 0; u < a.transitions.size(); ++u) {
    for (std::size_t i = 0; i < a.transitions[u].data.size(); ++i) {
      EXPECT_NEAR(a.transitions[u].data[i], b.transitions[u].data[i], tol);
    }
  }
  for (std::size_t o = 0; o < a.preferences.size(); ++o) EXPECT_NEAR(a.preferences[o], b.preferences[o], tol);
  for (std::size_t s = 0; s < a.state_prior.size(); ++s) EXPECT_NEAR(a.state_prior[s], b.state_prior[s], tol);
  EXPECT_EQ(a.policies, b.policies);
  EXPECT_EQ(a.state_labels, b.state_labels);
  EXPECT_EQ(a.outcome_labels, b.outcome_labels);
  EXPECT_EQ(a.action_labels, b.action_labels);
}

TEST(Validate, MazeModelIsValid) { EXPECT_TRUE(validate(tmaze::build_tmaze_model()).empty()); }

TEST(Validate, ReportsColumnSum) {
  auto m = tmaze::build_tmaze_model();
  m.likelihood(0, 0) = 0.9;  // column (center, white) now sums to 0.9
  const auto v = validate(m);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].find("A column 0"), std::string::npos) << v[0];
}

TEST(Validate, ReportsPolicyIndex) {
  auto m = tmaze::build_tmaze_model();
  auto policies = m.policies.policies();
  policies[3].actions[1] = m.num_actions;
  m.policies = PolicySet(policies);
  const auto v = validate(m);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].find("policy 3"), std::string::npos) << v[0];
}

TEST(Validate, ReportsEveryViolation) {
  auto m = tmaze::build_tmaze_model();
  m.preferences.pop_back();
  m.state_prior[0] = 0.7;
  m.transitions[2](0, 5) = 0.5;
  EXPECT_EQ(validate(m).size(), 3u);
  EXPECT_THROW(require_valid(m), ModelError);
}

TEST(PolicySet, RejectsDuplicatesAndEmpty) {
  EXPECT_THROW(PolicySet({}), InvalidInputError);
  EXPECT_THROW(PolicySet({Policy{{0, 1}}, Policy{{0, 1}}}), InvalidInputError);
}

TEST(Spec, MazeRoundTrip) {
  const auto model = tmaze::build_tmaze_model();
  const auto path = temp_path("tmaze.json");
  save_spec(model, path);
  const auto loaded = load_spec(path);
  expect_models_equal(model, loaded, 1e-12);
  EXPECT_EQ(loaded.num_states, 8u);
  EXPECT_EQ(loaded.num_outcomes, 7u);
  EXPECT_EQ(loaded.num_actions, 4u);
  EXPECT_EQ(loaded.horizon, 3u);
  EXPECT_EQ(loaded.policies.size(), 10u);
  EXPECT_EQ(format_spec(loaded), format_spec(model));
}

TEST(Spec, NegativeProbabilityNamesEntry) {
  auto text = format_spec(tmaze::build_tmaze_model());
  {
    // First row of A starts [1.0, 0.0, ...]; make the second entry negative.
    const auto pos = text.find("\"A\"");
    ASSERT_NE(pos, std::string::npos);
    const auto zero = text.find("0.0", text.find("1.0", pos) + 3);
    text.replace(zero, 3, "-0.25");
  }
  try {
    parse_spec(text);
    FAIL() << "expected SchemaError";
  } catch (const SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find("A[0][1]"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("negative"), std::string::npos) << e.what();
  }
}

TEST(Spec, MissingFieldAndFile) {
  EXPECT_THROW(load_spec(temp_path("does-not-exist.json")), IoError);
  try {
    parse_spec(R"({"num_states": 2, "num_outcomes": 2, "num_actions": 1})");
    FAIL();
  } catch (const SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find("horizon"), std::string::npos);
  }
  EXPECT_THROW(parse_spec("{not json"), SchemaError);
}

TEST(Spec, InvariantViolationOnLoad) {
  auto m = tmaze::build_tmaze_model();
  m.likelihood(0, 0) = 0.9;
  EXPECT_THROW(parse_spec(format_spec(m)), ModelError);
}

TEST(Spec, StatePreferencesRoundTrip) {
  auto m = tmaze::build_tmaze_model();
  m.state_preferences = std::vector<double>{1, 4, 0.5, 1, 1, 0.5, 4, 1};
  const auto back = parse_spec(format_spec(m));
  ASSERT_TRUE(back.state_preferences);
  EXPECT_EQ(*back.state_preferences, *m.state_preferences);
}

TEST(Spec, RandomModelsRoundTripExactly) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 100; ++i) {
    const auto model = testing::random_model(rng, {6, 6, 4, 4});
    ASSERT_TRUE(validate(model).empty());
    const auto text = format_spec(model);
    const auto back = parse_spec(text);
    expect_models_equal(model, back, 0.0);
    EXPECT_EQ(format_spec(back), text);
  }
}

}  // namespace
}  // namespace aif
