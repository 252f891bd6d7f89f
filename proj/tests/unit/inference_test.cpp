#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "aif/errors.hpp"
#include "aif/inference.hpp"
#include "aif/tmaze.hpp"
#include "../support/oracle.hpp"

namespace aif {
namespace {

using tmaze::Context;
using tmaze::Location;
using tmaze::state_index;

TEST(InferStates, CenterObservationKeepsContextAtEvenOdds) {
  const auto model = tmaze::build_tmaze_model();
  const std::vector<Observation> obs{{1, tmaze::outcome::kCenter}};
  const auto beliefs = infer_states(model, model.policies[0], obs);
  ASSERT_TRUE(beliefs.converged);
  const auto& q1 = beliefs.states[0];
  EXPECT_EQ(q1[state_index(Location::Center, Context::White)], 0.5);
  EXPECT_EQ(q1[state_index(Location::Center, Context::Black)], 0.5);
}

TEST(InferStates, WhiteCueResolvesContext) {
  const auto model = tmaze::build_tmaze_model();
  // Policy (3,1): go-cue, then go-left.
  const Policy& policy = model.policies[7];
  ASSERT_EQ(policy.actions, (std::vector<Index>{3, 1}));
  const std::vector<Observation> obs{{1, tmaze::outcome::kCenter}, {2, tmaze::outcome::kCueWhite}};
  const auto beliefs = infer_states(model, policy, obs);
  ASSERT_TRUE(beliefs.converged);
  EXPECT_NEAR(beliefs.states[1][state_index(Location::Cue, Context::White)], 1.0, 1e-9);
  EXPECT_NEAR(beliefs.states[2][state_index(Location::Left, Context::White)], 1.0, 1e-9);
}

TEST(InferStates, RejectsMalformedObservations) {
  const auto model = tmaze::build_tmaze_model();
  const Policy& p = model.policies[0];
  EXPECT_THROW(infer_states(model, p, std::vector<Observation>{{0, 0}}), InvalidInputError);
  EXPECT_THROW(infer_states(model, p, std::vector<Observation>{{4, 0}}), InvalidInputError);
  EXPECT_THROW(infer_states(model, p, std::vector<Observation>{{1, 7}}), InvalidInputError);
  EXPECT_THROW(infer_states(model, p, std::vector<Observation>{{2, 0}, {1, 0}}), InvalidInputError);
}

TEST(InferStates, NoObservationsGivesPriorPredictions) {
  const auto model = tmaze::build_tmaze_model();
  const auto beliefs = infer_states(model, model.policies[7], {});
  ASSERT_TRUE(beliefs.converged);
  EXPECT_NEAR(beliefs.states[0][0], 0.5, 1e-12);
  EXPECT_NEAR(beliefs.states[1][state_index(Location::Cue, Context::Black)], 0.5, 1e-6);
  EXPECT_NEAR(beliefs.states[2][state_index(Location::Left, Context::White)], 0.5, 1e-6);
}

TEST(InferStates, BeliefsAreDistributions) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 200; ++i) {
    const auto model = testing::random_model(rng, {6, 6, 4, 3});
    const auto& policy = model.policies[i % model.policies.size()];
    const std::size_t t = 1 + i % model.horizon;
    const auto obs = testing::sample_observations(model, policy, t, rng);
    const auto beliefs = infer_states(model, policy, obs);
    ASSERT_EQ(beliefs.states.size(), model.horizon);
    for (const auto& q : beliefs.states) {
      double total = 0.0;
      for (double v : q) {
        EXPECT_GE(v, 0.0);
        total += v;
      }
      EXPECT_NEAR(total, 1.0, 1e-9);
    }
  }
}

TEST(Vfe, UpperBoundsSurprisal) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 200; ++i) {
    const auto model = testing::random_model(rng, {6, 6, 4, 3});
    const auto& policy = model.policies[i % model.policies.size()];
    const std::size_t t = 1 + i % model.horizon;
    const auto obs = testing::sample_observations(model, policy, t, rng);
    const auto beliefs = infer_states(model, policy, obs, {1e-12, 500});
    const double f = vfe(model, beliefs.states, obs, policy);
    const double surprisal = -std::log(testing::exact_evidence(model, policy, obs));
    EXPECT_GE(f - surprisal, -1e-9);
  }
}

TEST(Vfe, TightWhenPosteriorFactorizes) {
  // With a single epoch the mean-field family is exact.
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    auto model = testing::random_model(rng, {6, 6, 3, 1});
    const auto& policy = model.policies[0];
    const auto obs = testing::sample_observations(model, policy, 1, rng);
    const auto beliefs = infer_states(model, policy, obs);
    const double f = vfe(model, beliefs.states, obs, policy);
    EXPECT_NEAR(f, -std::log(testing::exact_evidence(model, policy, obs)), 1e-9);
    const auto exact = testing::exact_marginals(model, policy, obs);
    for (std::size_t s = 0; s < model.num_states; ++s) EXPECT_NEAR(beliefs.states[0][s], exact[0][s], 1e-9);
  }
}

TEST(BmaBeliefs, WeightsPerPolicyBeliefs) {
  BeliefEnsemble e;
  e.per_policy_states = {{Categorical(std::vector<double>{1, 0})}, {Categorical(std::vector<double>{0, 1})}};
  e.policy_posterior = Categorical(std::vector<double>{0.25, 0.75});
  const auto q = bma_beliefs(e, 1);
  EXPECT_NEAR(q[0], 0.25, 1e-15);
  EXPECT_NEAR(q[1], 0.75, 1e-15);
}

}  // namespace
}  // namespace aif
