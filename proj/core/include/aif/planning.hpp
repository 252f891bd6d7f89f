#pragma once

#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "aif/model.hpp"
#include "aif/numerics.hpp"

namespace aif {

/// Policy-scoring objective. ExpectedFreeEnergy composes the two limiting
/// cases: information gain (optimal design) and expected utility (decision
/// theory). RiskOnly is the KL-control term alone.
enum class ObjectiveKind {
  ExpectedFreeEnergy,
  InfoGainOnly,
  ExpectedUtilityOutcomes,
  ExpectedUtilityStates,
  RiskOnly,
};

std::string_view to_string(ObjectiveKind kind);
/// CLI names: efe, eig, eu, eu-states, klc.
std::string_view agent_name(ObjectiveKind kind);
std::optional<ObjectiveKind> objective_from_agent_name(std::string_view name);
/// True for objectives that need a prior over states.
bool needs_state_prior(ObjectiveKind kind);

/// Terms of the expected free energy for one (policy, future timestep).
struct EfeBreakdown {
  std::size_t timestep = 0;
  double risk_states = 0.0;     ///< KL[Q(s|π) ∥ P(s)]
  double ambiguity = 0.0;       ///< E_Q(s|π) H[P(o|s)]
  double intrinsic = 0.0;       ///< expected information gain
  double extrinsic = 0.0;       ///< expected normalized log preference
  double evidence_bound = 0.0;  ///< E_Q(o|π) KL[Q(s|o,π) ∥ P(s|o)]
  double total = 0.0;           ///< G(π,τ) under the chosen objective
};

struct PlanContext {
  std::size_t current_epoch = 1;          ///< t, 1-based
  std::vector<Index> executed_actions;    ///< actions taken at epochs < t
  double precision = 1.0;                 ///< softmax inverse temperature γ
  double tie_tolerance = 1e-9;            ///< probability units
  std::optional<Categorical> prior_states_for_risk;  ///< P(s_τ)
};

struct PolicyEvaluation {
  double total = 0.0;
  std::vector<EfeBreakdown> steps;  ///< one per τ in (t, T]
};

/// Q(s_τ|π) = B[a_τ-1] ⋯ B[a_t] q_now, for 1-based t ≤ τ ≤ T.
Categorical predictive_states(const GenerativeModel& model, const Categorical& q_now, const Policy& policy,
                              std::size_t from_epoch, std::size_t to_epoch);

/// Q(o) = A q_s.
Categorical predictive_outcome(const Categorical& q_s, const Matrix& likelihood);

double risk_states(const Categorical& q_s, const Categorical& prior_s);
double ambiguity(const Categorical& q_s, const Matrix& likelihood);

/// Mutual information between states and outcomes under q_s:
/// H[A q_s] − E_q_s H[A column].
double expected_info_gain(const Categorical& q_s, const Matrix& likelihood);
/// Same quantity as the expected posterior divergence E_Q(o) KL[Q(s|o) ∥ q_s].
double expected_info_gain_posterior_form(const Categorical& q_s, const Matrix& likelihood);

/// Σ_o q_o[o] (C[o] − logsumexp C).
double extrinsic_value(const Categorical& q_o, std::span<const double> preferences);

/// Σ over future timesteps τ ∈ (t, T] of G(π,τ) for the given objective,
/// using forward-propagated beliefs from q_now = Q(s_t|π). All breakdown
/// fields are filled whatever the objective; risk and the evidence bound use
/// ctx.prior_states_for_risk, or a uniform prior when none is given.
/// Throws ConfigError when the objective needs a state prior and none is set.
PolicyEvaluation expected_free_energy(const GenerativeModel& model, const Categorical& q_now, const Policy& policy,
                                      const PlanContext& ctx, ObjectiveKind objective);

/// softmax(−γ G) over policies whose prefix matches ctx.executed_actions;
/// zero elsewhere. Throws ConfigError if no policy matches the history.
Categorical policy_posterior(std::span<const double> g_values, const PolicySet& policies, const PlanContext& ctx);

/// P(a) = Σ_{π: π.actions[t-1] = a} Q(π).
Categorical action_marginal(const Categorical& policy_post, const PolicySet& policies, std::size_t epoch,
                            std::size_t num_actions);

/// Index of the most probable action; entries within tie_tolerance of the
/// maximum are tied and resolved uniformly with rng.
Index select_action(const Categorical& action_marg, std::mt19937_64& rng, double tie_tolerance);

struct EvidenceBoundTerms {
  std::size_t timestep = 0;
  double info_gain = 0.0;
  double expected_log_evidence = 0.0;  ///< E_Q(o|π) ln P(o), P(o) = A P(s)
  double evidence_bound = 0.0;
  double g_full = 0.0;                 ///< E_Q̃[ln Q(s|π) − ln P(o,s)]
};

/// Per future timestep, the terms of G_full = −info_gain − expected_log_evidence + evidence_bound.
std::vector<EvidenceBoundTerms> evidence_bound_diagnostic(const GenerativeModel& model, const Categorical& q_now,
                                                          const Policy& policy, const PlanContext& ctx,
                                                          const Categorical& prior_states);

/// Evidence bound at a single predictive state distribution.
EvidenceBoundTerms evidence_bound_terms(const Categorical& q_s, const Matrix& likelihood,
                                        const Categorical& prior_states);

struct UtilityComparison {
  double state_utility = 0.0;    ///< E_Q(s)[ln P(s)]
  double outcome_utility = 0.0;  ///< E_Q(o)[ln P(o)], P(o) = A P(s)
};

UtilityComparison state_outcome_utility_comparison(const GenerativeModel& model, const Categorical& q_s,
                                                   const Categorical& prior_states);

}  // namespace aif
