#pragma once

#include <span>
#include <vector>

#include "aif/model.hpp"
#include "aif/numerics.hpp"

namespace aif {

/// An outcome observed at a 1-based epoch.
struct Observation {
  std::size_t timestep = 1;
  Index outcome = 0;

  bool operator==(const Observation&) const = default;
};

struct InferenceOptions {
  double tolerance = 1e-6;  ///< stop when the max elementwise change of a sweep is below this
  int max_sweeps = 32;
};

struct StateBeliefs {
  std::vector<Categorical> states;  ///< Q(s_τ|π), τ = 1..T
  bool converged = false;
  int sweeps = 0;
};

/// Mean-field state posteriors under one policy.
///
/// Coordinate ascent on the variational free energy: each sweep updates
/// τ = 1..T then T..1 with
///   ln Q(s_τ) = ln A[o_τ,·] + E_{Q(s_τ-1)}[ln B(s_τ|s_τ-1)] + E_{Q(s_τ+1)}[ln B(s_τ+1|s_τ)]
/// (ln D in place of the first transition term at τ = 1), starting from
/// uniform beliefs. Non-convergence is reported through the flag.
StateBeliefs infer_states(const GenerativeModel& model, const Policy& policy,
                          std::span<const Observation> observed, const InferenceOptions& options = {});

/// Mean-field variational free energy E_Q[ln Q(s_1:T) − ln P(o_1:t, s_1:T | π)] in nats.
double vfe(const GenerativeModel& model, std::span<const Categorical> q_states,
           std::span<const Observation> observed, const Policy& policy);

/// Per-policy state beliefs plus the policy posterior held at one epoch.
struct BeliefEnsemble {
  std::vector<std::vector<Categorical>> per_policy_states;  ///< [policy][τ-1]
  Categorical policy_posterior{std::vector<double>{1.0}};
  std::vector<Observation> observed;
};

/// Bayesian model average Σ_π Q(π) Q(s_τ|π) at a 1-based timestep.
Categorical bma_beliefs(const BeliefEnsemble& ensemble, std::size_t timestep);

/// Throws InvalidInputError unless observations have increasing timesteps in
/// 1..horizon and outcome indices below num_outcomes.
void check_observations(const GenerativeModel& model, std::span<const Observation> observed);

}  // namespace aif
