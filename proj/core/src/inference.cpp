#include "aif/inference.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "aif/errors.hpp"

namespace aif {

void check_observations(const GenerativeModel& model, std::span<const Observation> observed) {
  std::size_t last = 0;
  for (const auto& obs : observed) {
    if (obs.timestep < 1 || obs.timestep > model.horizon) {
      throw InvalidInputError("observation timestep " + std::to_string(obs.timestep) + " outside 1.." +
                              std::to_string(model.horizon));
    }
    if (obs.timestep <= last) throw InvalidInputError("observation timesteps must be strictly increasing");
    if (obs.outcome >= model.num_outcomes) {
      throw InvalidInputError("observed outcome " + std::to_string(obs.outcome) + " >= num_outcomes");
    }
    last = obs.timestep;
  }
}

namespace {

void check_policy(const GenerativeModel& model, const Policy& policy) {
  if (policy.actions.size() + 1 != model.horizon) {
    throw InvalidInputError("policy length " + std::to_string(policy.actions.size()) + " does not match horizon " +
                            std::to_string(model.horizon));
  }
  for (Index a : policy.actions) {
    if (a >= model.num_actions) throw InvalidInputError("policy action " + std::to_string(a) + " >= num_actions");
  }
}

Matrix log_matrix(const Matrix& m) {
  Matrix out = m;
  for (double& v : out.data) v = safe_log(v);
  return out;
}

// Observed outcome per timestep (index 0 = τ 1), or -1.
std::vector<long> outcome_by_timestep(const GenerativeModel& model, std::span<const Observation> observed) {
  std::vector<long> out(model.horizon, -1);
  for (const auto& obs : observed) out[obs.timestep - 1] = static_cast<long>(obs.outcome);
  return out;
}

double ordered_sum(std::vector<double>& terms) {
  std::sort(terms.begin(), terms.end());
  double acc = 0.0;
  for (double v : terms) acc += v;
  return acc;
}

}  // namespace

StateBeliefs infer_states(const GenerativeModel& model, const Policy& policy, std::span<const Observation> observed,
                          const InferenceOptions& options) {
  check_policy(model, policy);
  check_observations(model, observed);

  const std::size_t T = model.horizon;
  const std::size_t S = model.num_states;
  const auto outcomes = outcome_by_timestep(model, observed);

  std::vector<Matrix> log_b;
  log_b.reserve(policy.actions.size());
  for (Index a : policy.actions) log_b.push_back(log_matrix(model.transitions[a]));
  std::vector<double> log_d(S);
  for (Index s = 0; s < S; ++s) log_d[s] = safe_log(model.state_prior[s]);

  std::vector<std::vector<double>> q(T, std::vector<double>(S, 1.0 / static_cast<double>(S)));
  std::vector<double> logits(S);

  // Message terms are summed in sorted order so the result does not depend
  // on state indexing: models symmetric under a state permutation keep
  // exactly symmetric posteriors. Temporal mean field has unstable symmetric
  // fixed points (e.g. a static context), which amplify 1-ulp asymmetries.
  std::vector<double> terms;
  terms.reserve(2 * S + 2);
  auto update = [&](std::size_t tau) {  // tau is 0-based here
    for (Index s = 0; s < S; ++s) {
      terms.clear();
      if (outcomes[tau] >= 0) terms.push_back(safe_log(model.likelihood(static_cast<Index>(outcomes[tau]), s)));
      if (tau == 0) {
        terms.push_back(log_d[s]);
      } else {
        const auto row = log_b[tau - 1].row(s);
        const auto& prev = q[tau - 1];
        for (Index sp = 0; sp < S; ++sp) terms.push_back(row[sp] * prev[sp]);
      }
      if (tau + 1 < T) {
        const Matrix& lb = log_b[tau];
        const auto& next = q[tau + 1];
        for (Index sn = 0; sn < S; ++sn) terms.push_back(lb(sn, s) * next[sn]);
      }
      logits[s] = ordered_sum(terms);
    }
    const Categorical fresh = softmax(logits, 1.0);
    double change = 0.0;
    for (Index s = 0; s < S; ++s) change = std::max(change, std::abs(fresh[s] - q[tau][s]));
    q[tau] = fresh.vec();
    return change;
  };

  StateBeliefs result;
  for (int sweep = 1; sweep <= options.max_sweeps; ++sweep) {
    double change = 0.0;
    for (std::size_t tau = 0; tau < T; ++tau) change = std::max(change, update(tau));
    for (std::size_t tau = T; tau-- > 0;) change = std::max(change, update(tau));
    result.sweeps = sweep;
    if (change < options.tolerance) {
      result.converged = true;
      break;
    }
  }
  result.states.reserve(T);
  for (auto& qt : q) result.states.emplace_back(std::move(qt));
  return result;
}

double vfe(const GenerativeModel& model, std::span<const Categorical> q_states, std::span<const Observation> observed,
           const Policy& policy) {
  check_policy(model, policy);
  check_observations(model, observed);
  if (q_states.size() != model.horizon) {
    throw ShapeError("vfe: " + std::to_string(q_states.size()) + " beliefs for horizon " +
                     std::to_string(model.horizon));
  }
  for (const auto& q : q_states) {
    if (q.size() != model.num_states) throw ShapeError("vfe: belief length does not match num_states");
  }

  const std::size_t S = model.num_states;
  double f = 0.0;
  for (const auto& q : q_states) f -= entropy(q);
  for (Index s = 0; s < S; ++s) f -= q_states[0][s] * safe_log(model.state_prior[s]);
  for (std::size_t tau = 1; tau < model.horizon; ++tau) {
    const Matrix& b = model.transitions[policy.actions[tau - 1]];
    const auto& cur = q_states[tau];
    const auto& prev = q_states[tau - 1];
    for (Index s = 0; s < S; ++s) {
      if (cur[s] == 0.0) continue;
      double acc = 0.0;
      for (Index sp = 0; sp < S; ++sp) {
        if (prev[sp] != 0.0) acc += prev[sp] * safe_log(b(s, sp));
      }
      f -= cur[s] * acc;
    }
  }
  for (const auto& obs : observed) {
    const auto& q = q_states[obs.timestep - 1];
    for (Index s = 0; s < S; ++s) {
      if (q[s] != 0.0) f -= q[s] * safe_log(model.likelihood(obs.outcome, s));
    }
  }
  return f;
}

Categorical bma_beliefs(const BeliefEnsemble& ensemble, std::size_t timestep) {
  const auto& per_policy = ensemble.per_policy_states;
  if (per_policy.size() != ensemble.policy_posterior.size()) {
    throw ShapeError("bma_beliefs: policy posterior does not match the number of policies");
  }
  if (per_policy.empty() || timestep < 1 || timestep > per_policy.front().size()) {
    throw InvalidInputError("bma_beliefs: timestep " + std::to_string(timestep) + " out of range");
  }
  const std::size_t S = per_policy.front()[timestep - 1].size();
  std::vector<double> avg(S, 0.0);
  for (std::size_t k = 0; k < per_policy.size(); ++k) {
    const double w = ensemble.policy_posterior[k];
    if (w == 0.0) continue;
    const auto& q = per_policy[k][timestep - 1];
    for (Index s = 0; s < S; ++s) avg[s] += w * q[s];
  }
  return normalize(avg);
}

}  // namespace aif
