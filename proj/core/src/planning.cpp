#include "aif/planning.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>

#include "aif/errors.hpp"

namespace aif {

std::string_view to_string(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::ExpectedFreeEnergy: return "ExpectedFreeEnergy";
    case ObjectiveKind::InfoGainOnly: return "InfoGainOnly";
    case ObjectiveKind::ExpectedUtilityOutcomes: return "ExpectedUtilityOutcomes";
    case ObjectiveKind::ExpectedUtilityStates: return "ExpectedUtilityStates";
    case ObjectiveKind::RiskOnly: return "RiskOnly";
  }
  return "unknown";
}

std::string_view agent_name(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::ExpectedFreeEnergy: return "efe";
    case ObjectiveKind::InfoGainOnly: return "eig";
    case ObjectiveKind::ExpectedUtilityOutcomes: return "eu";
    case ObjectiveKind::ExpectedUtilityStates: return "eu-states";
    case ObjectiveKind::RiskOnly: return "klc";
  }
  return "unknown";
}

std::optional<ObjectiveKind> objective_from_agent_name(std::string_view name) {
  for (auto kind : {ObjectiveKind::ExpectedFreeEnergy, ObjectiveKind::InfoGainOnly,
                    ObjectiveKind::ExpectedUtilityOutcomes, ObjectiveKind::ExpectedUtilityStates,
                    ObjectiveKind::RiskOnly}) {
    if (agent_name(kind) == name) return kind;
  }
  return std::nullopt;
}

bool needs_state_prior(ObjectiveKind kind) {
  return kind == ObjectiveKind::ExpectedUtilityStates || kind == ObjectiveKind::RiskOnly;
}

Categorical predictive_states(const GenerativeModel& model, const Categorical& q_now, const Policy& policy,
                              std::size_t from_epoch, std::size_t to_epoch) {
  if (from_epoch < 1 || from_epoch > to_epoch || to_epoch > model.horizon) {
    throw InvalidInputError("predictive_states: need 1 <= t <= tau <= T (t=" + std::to_string(from_epoch) +
                            ", tau=" + std::to_string(to_epoch) + ")");
  }
  if (q_now.size() != model.num_states) throw ShapeError("predictive_states: belief length != num_states");
  if (policy.actions.size() + 1 < to_epoch) throw InvalidInputError("predictive_states: policy too short");
  std::vector<double> q = q_now.vec();
  for (std::size_t epoch = from_epoch; epoch < to_epoch; ++epoch) {
    const Index a = policy.actions[epoch - 1];
    if (a >= model.num_actions) throw InvalidInputError("predictive_states: action index out of range");
    q = matvec(model.transitions[a], q);
  }
  return normalize(q);
}

Categorical predictive_outcome(const Categorical& q_s, const Matrix& likelihood) {
  if (q_s.size() != likelihood.cols) throw ShapeError("predictive_outcome: belief length != likelihood columns");
  return normalize(matvec(likelihood, q_s));
}

double risk_states(const Categorical& q_s, const Categorical& prior_s) { return kl_divergence(q_s, prior_s); }

double ambiguity(const Categorical& q_s, const Matrix& likelihood) {
  if (q_s.size() != likelihood.cols) throw ShapeError("ambiguity: belief length != likelihood columns");
  double amb = 0.0;
  for (Index s = 0; s < q_s.size(); ++s) {
    if (q_s[s] == 0.0) continue;
    amb += q_s[s] * entropy(likelihood.column(s));
  }
  return amb;
}

double expected_info_gain_posterior_form(const Categorical& q_s, const Matrix& likelihood) {
  if (q_s.size() != likelihood.cols) throw ShapeError("expected_info_gain: belief length != likelihood columns");
  const std::size_t S = q_s.size();
  double gain = 0.0;
  std::vector<double> joint(S);
  for (Index o = 0; o < likelihood.rows; ++o) {
    double q_o = 0.0;
    for (Index s = 0; s < S; ++s) {
      joint[s] = likelihood(o, s) * q_s[s];
      q_o += joint[s];
    }
    if (q_o <= 0.0) continue;
    double kl = 0.0;
    for (Index s = 0; s < S; ++s) {
      if (joint[s] <= 0.0) continue;
      const double post = joint[s] / q_o;
      kl += post * (std::log(post) - std::log(q_s[s]));
    }
    gain += q_o * kl;
  }
  return gain;
}

double expected_info_gain(const Categorical& q_s, const Matrix& likelihood) {
  if (q_s.size() != likelihood.cols) throw ShapeError("expected_info_gain: belief length != likelihood columns");
  const double mi = entropy(matvec(likelihood, q_s)) - ambiguity(q_s, likelihood);
  assert(std::abs(mi - expected_info_gain_posterior_form(q_s, likelihood)) <= 1e-9 * std::max(1.0, std::abs(mi)));
  return mi;
}

double extrinsic_value(const Categorical& q_o, std::span<const double> preferences) {
  if (q_o.size() != preferences.size()) throw ShapeError("extrinsic_value: outcome/preference length mismatch");
  const double log_norm = logsumexp(preferences);
  double value = 0.0;
  for (Index o = 0; o < q_o.size(); ++o) {
    if (q_o[o] == 0.0) continue;
    value += q_o[o] * (preferences[o] - log_norm);
  }
  return value;
}

EvidenceBoundTerms evidence_bound_terms(const Categorical& q_s, const Matrix& likelihood,
                                        const Categorical& prior_states) {
  if (q_s.size() != likelihood.cols || prior_states.size() != likelihood.cols) {
    throw ShapeError("evidence_bound: belief/prior length != likelihood columns");
  }
  const std::size_t S = q_s.size();
  const auto p_o = matvec(likelihood, prior_states);

  EvidenceBoundTerms terms;
  std::vector<double> joint(S);
  for (Index o = 0; o < likelihood.rows; ++o) {
    double q_o = 0.0;
    for (Index s = 0; s < S; ++s) {
      joint[s] = likelihood(o, s) * q_s[s];
      q_o += joint[s];
    }
    if (q_o <= 0.0) continue;
    double gain = 0.0;
    double bound = 0.0;
    for (Index s = 0; s < S; ++s) {
      if (joint[s] <= 0.0) continue;
      const double post = joint[s] / q_o;
      const double model_post = p_o[o] > 0.0 ? likelihood(o, s) * prior_states[s] / p_o[o] : 0.0;
      gain += post * (std::log(post) - std::log(q_s[s]));
      bound += post * (std::log(post) - safe_log(model_post));
      terms.g_full += joint[s] * (std::log(q_s[s]) - std::log(likelihood(o, s)) - safe_log(prior_states[s]));
    }
    terms.info_gain += q_o * gain;
    terms.evidence_bound += q_o * bound;
    terms.expected_log_evidence += q_o * safe_log(p_o[o]);
  }
  return terms;
}

namespace {

Categorical diagnostic_prior(const PlanContext& ctx, std::size_t num_states) {
  if (ctx.prior_states_for_risk) {
    if (ctx.prior_states_for_risk->size() != num_states) {
      throw ShapeError("prior_states_for_risk length != num_states");
    }
    return *ctx.prior_states_for_risk;
  }
  return Categorical::uniform(num_states);
}

void check_plan_context(const GenerativeModel& model, const PlanContext& ctx) {
  if (ctx.current_epoch < 1 || ctx.current_epoch > model.horizon) {
    throw InvalidInputError("plan context: epoch " + std::to_string(ctx.current_epoch) + " outside 1.." +
                            std::to_string(model.horizon));
  }
  if (ctx.executed_actions.size() + 1 != ctx.current_epoch) {
    throw InvalidInputError("plan context: executed_actions must hold t-1 actions");
  }
}

}  // namespace

PolicyEvaluation expected_free_energy(const GenerativeModel& model, const Categorical& q_now, const Policy& policy,
                                      const PlanContext& ctx, ObjectiveKind objective) {
  check_plan_context(model, ctx);
  if (needs_state_prior(objective) && !ctx.prior_states_for_risk) {
    throw ConfigError(std::string("objective ") + std::string(to_string(objective)) +
                      " requires a state prior (prior_states_for_risk / state_preferences)");
  }
  const Categorical prior = diagnostic_prior(ctx, model.num_states);

  PolicyEvaluation eval;
  Categorical q_s = q_now;
  for (std::size_t tau = ctx.current_epoch + 1; tau <= model.horizon; ++tau) {
    q_s = predictive_states(model, q_s, policy, tau - 1, tau);
    const Categorical q_o = predictive_outcome(q_s, model.likelihood);

    EfeBreakdown step;
    step.timestep = tau;
    step.risk_states = risk_states(q_s, prior);
    step.ambiguity = ambiguity(q_s, model.likelihood);
    step.intrinsic = expected_info_gain(q_s, model.likelihood);
    step.extrinsic = extrinsic_value(q_o, model.preferences);
    step.evidence_bound = evidence_bound_terms(q_s, model.likelihood, prior).evidence_bound;

    switch (objective) {
      case ObjectiveKind::ExpectedFreeEnergy:
        step.total = -step.intrinsic - step.extrinsic;
        break;
      case ObjectiveKind::InfoGainOnly:
        step.total = -step.intrinsic;
        break;
      case ObjectiveKind::ExpectedUtilityOutcomes:
        step.total = -step.extrinsic;
        break;
      case ObjectiveKind::ExpectedUtilityStates: {
        double utility = 0.0;
        for (Index s = 0; s < q_s.size(); ++s) {
          if (q_s[s] != 0.0) utility += q_s[s] * safe_log(prior[s]);
        }
        step.total = -utility;
        break;
      }
      case ObjectiveKind::RiskOnly:
        step.total = step.risk_states;
        break;
    }
    eval.total += step.total;
    eval.steps.push_back(step);
  }
  return eval;
}

Categorical policy_posterior(std::span<const double> g_values, const PolicySet& policies, const PlanContext& ctx) {
  if (g_values.size() != policies.size()) {
    throw ShapeError("policy_posterior: " + std::to_string(g_values.size()) + " G values for " +
                     std::to_string(policies.size()) + " policies");
  }
  const auto& history = ctx.executed_actions;
  std::vector<Index> viable;
  std::vector<double> logits;
  for (Index k = 0; k < policies.size(); ++k) {
    const auto& actions = policies[k].actions;
    if (actions.size() < history.size() || !std::equal(history.begin(), history.end(), actions.begin())) continue;
    viable.push_back(k);
    logits.push_back(-g_values[k]);
  }
  if (viable.empty()) throw ConfigError("policy_posterior: no policy is consistent with the executed actions");
  const Categorical sub = softmax(logits, ctx.precision);
  std::vector<double> post(policies.size(), 0.0);
  for (std::size_t i = 0; i < viable.size(); ++i) post[viable[i]] = sub[i];
  return Categorical(std::move(post));
}

Categorical action_marginal(const Categorical& policy_post, const PolicySet& policies, std::size_t epoch,
                            std::size_t num_actions) {
  if (policy_post.size() != policies.size()) throw ShapeError("action_marginal: posterior/policy count mismatch");
  std::vector<double> marg(num_actions, 0.0);
  for (Index k = 0; k < policies.size(); ++k) {
    const auto& actions = policies[k].actions;
    if (epoch < 1 || epoch > actions.size()) {
      throw InvalidInputError("action_marginal: epoch " + std::to_string(epoch) + " has no action");
    }
    const Index a = actions[epoch - 1];
    if (a >= num_actions) throw InvalidInputError("action_marginal: action index out of range");
    marg[a] += policy_post[k];
  }
  return normalize(marg);
}

Index select_action(const Categorical& action_marg, std::mt19937_64& rng, double tie_tolerance) {
  const double best = *std::max_element(action_marg.begin(), action_marg.end());
  std::vector<Index> tied;
  for (Index a = 0; a < action_marg.size(); ++a) {
    if (action_marg[a] >= best - tie_tolerance) tied.push_back(a);
  }
  if (tied.size() == 1) return tied.front();
  std::uniform_int_distribution<std::size_t> pick(0, tied.size() - 1);
  return tied[pick(rng)];
}

std::vector<EvidenceBoundTerms> evidence_bound_diagnostic(const GenerativeModel& model, const Categorical& q_now,
                                                          const Policy& policy, const PlanContext& ctx,
                                                          const Categorical& prior_states) {
  check_plan_context(model, ctx);
  if (prior_states.size() != model.num_states) throw ShapeError("evidence_bound_diagnostic: prior length");
  std::vector<EvidenceBoundTerms> out;
  Categorical q_s = q_now;
  for (std::size_t tau = ctx.current_epoch + 1; tau <= model.horizon; ++tau) {
    q_s = predictive_states(model, q_s, policy, tau - 1, tau);
    auto terms = evidence_bound_terms(q_s, model.likelihood, prior_states);
    terms.timestep = tau;
    out.push_back(terms);
  }
  return out;
}

UtilityComparison state_outcome_utility_comparison(const GenerativeModel& model, const Categorical& q_s,
                                                   const Categorical& prior_states) {
  if (q_s.size() != model.num_states || prior_states.size() != model.num_states) {
    throw ShapeError("state_outcome_utility_comparison: belief/prior length != num_states");
  }
  const auto q_o = matvec(model.likelihood, q_s);
  const auto p_o = matvec(model.likelihood, prior_states);
  UtilityComparison cmp;
  for (Index s = 0; s < q_s.size(); ++s) {
    if (q_s[s] != 0.0) cmp.state_utility += q_s[s] * safe_log(prior_states[s]);
  }
  for (Index o = 0; o < q_o.size(); ++o) {
    if (q_o[o] != 0.0) cmp.outcome_utility += q_o[o] * safe_log(p_o[o]);
  }
  return cmp;
}

}  // namespace aif
