#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <vector>

#include "aif/inference.hpp"
#include "aif/model.hpp"
#include "aif/planning.hpp"
#include "aif/tmaze.hpp"

namespace aif::harness {

enum class OutputFormat { Csv, Json };

struct ExperimentConfig {
  ObjectiveKind agent = ObjectiveKind::ExpectedFreeEnergy;
  std::size_t trials = tmaze::kTrials;
  std::uint64_t seed = 1;
  double precision = 1.0;
  double tie_tolerance = 1e-9;
  double reward_prob = tmaze::kDefaultRewardProb;
  std::optional<std::filesystem::path> model_path;     ///< default: built-in maze model
  std::optional<std::filesystem::path> schedule_path;  ///< default: standard 50-trial schedule
  std::filesystem::path output_dir = "out";
  OutputFormat format = OutputFormat::Csv;
};

/// Everything the agent saw, believed and did at one epoch.
struct EpochRecord {
  std::size_t epoch = 0;
  Index observation = 0;
  BeliefEnsemble beliefs;                    ///< per-policy Q(s_τ|π) and Q(π) after this observation
  std::vector<double> location_marginal;     ///< BMA over locations at τ = epoch
  std::vector<double> context_marginal;      ///< BMA over contexts at τ = epoch
  std::vector<PolicyEvaluation> evaluations; ///< per policy; empty at the final epoch
  std::optional<Categorical> action_marginal;
  std::optional<Index> action;
};

struct TrialRecord {
  std::size_t trial = 0;
  tmaze::Context context = tmaze::Context::White;
  std::vector<EpochRecord> epochs;
  std::vector<Index> actions;
  int score_delta = 0;
  int cumulative_score = 0;

  /// Posterior over policies at the last epoch that planned an action.
  const Categorical& decision_posterior() const;
};

struct ExperimentRecord {
  ExperimentConfig config;
  std::vector<TrialRecord> trials;
  int final_score = 0;
  double wall_seconds = 0.0;
};

/// Random streams for one trial, derived from the master seed so that the
/// environment draws do not depend on the agent's tie-breaking.
struct TrialStreams {
  std::uint64_t environment = 0;
  std::uint64_t tie_break = 0;
};
TrialStreams derive_streams(std::uint64_t master_seed, std::size_t trial);

/// Agent model for the config: the spec file at model_path, or the built-in
/// maze with the configured reward probability. The model must match the
/// maze's state/outcome/action counts. Throws ModelError/SchemaError/IoError,
/// and ConfigError when the agent needs a state prior the model lacks.
GenerativeModel prepare_model(const ExperimentConfig& config);

/// Normalized state_preferences when the model carries them.
std::optional<Categorical> state_prior_for(const GenerativeModel& model);

/// One closed-loop trial: perceive, infer, plan, act for each epoch.
/// env must be at the center with the trial's context.
TrialRecord run_trial(const GenerativeModel& model, tmaze::TmazeEnv& env, const ExperimentConfig& config,
                      std::mt19937_64& tie_rng, std::size_t trial_index = 1);

ExperimentRecord run_experiment(const ExperimentConfig& config);
ExperimentRecord run_experiment(const ExperimentConfig& config, const GenerativeModel& model,
                                const tmaze::ContextSchedule& schedule);

/// trials/beliefs/policies/breakdown tables (+ config) as CSV files or one records.json.
void write_records(const ExperimentRecord& record, const std::filesystem::path& output_dir, OutputFormat format);

/// Plain numeric tables for the per-epoch belief plots of trial 1 and the
/// per-trial policy/score plots.
void emit_plot_data(const ExperimentRecord& record, const std::filesystem::path& output_dir);

/// Floating-point text form used in every output file (12 significant digits).
std::string format_real(double v);

}  // namespace aif::harness
