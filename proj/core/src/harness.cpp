#include "aif/harness.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

#include "aif/errors.hpp"

namespace aif::harness {

using nlohmann::json;
using tmaze::Context;

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

const Categorical& TrialRecord::decision_posterior() const {
  for (auto it = epochs.rbegin(); it != epochs.rend(); ++it) {
    if (it->action) return it->beliefs.policy_posterior;
  }
  return epochs.back().beliefs.policy_posterior;
}

TrialStreams derive_streams(std::uint64_t master_seed, std::size_t trial) {
  auto draw = [&](std::uint32_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(trial), stream};
    std::uint32_t words[2];
    seq.generate(std::begin(words), std::end(words));
    return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
  };
  return {draw(0), draw(1)};
}

std::optional<Categorical> state_prior_for(const GenerativeModel& model) {
  if (!model.state_preferences) return std::nullopt;
  return normalize(*model.state_preferences);
}

GenerativeModel prepare_model(const ExperimentConfig& config) {
  GenerativeModel model = config.model_path ? load_spec(*config.model_path) : tmaze::build_tmaze_model(config.reward_prob);
  require_valid(model);
  if (model.num_states != tmaze::kNumStates || model.num_outcomes != tmaze::kNumOutcomes ||
      model.num_actions != tmaze::kNumActions) {
    throw ModelError("model must have 8 states, 7 outcomes and 4 actions to drive the maze environment");
  }
  if (needs_state_prior(config.agent) && !model.state_preferences) {
    throw ConfigError("agent '" + std::string(agent_name(config.agent)) +
                      "' needs a prior over states: supply --model with a 'state_preferences' entry");
  }
  return model;
}

namespace {

void check_config(const ExperimentConfig& config) {
  if (config.trials < 1) throw ConfigError("trials must be at least 1");
  if (!(config.precision >= 0.0)) throw ConfigError("precision must be nonnegative");
  if (!(config.tie_tolerance >= 0.0)) throw ConfigError("tie tolerance must be nonnegative");
  if (!(config.reward_prob >= 0.0 && config.reward_prob <= 1.0)) throw ConfigError("reward probability outside [0, 1]");
}

void fill_marginals(EpochRecord& rec) {
  const Categorical bma = bma_beliefs(rec.beliefs, rec.epoch);
  rec.location_marginal.assign(tmaze::kNumLocations, 0.0);
  rec.context_marginal.assign(tmaze::kNumContexts, 0.0);
  for (Index s = 0; s < bma.size(); ++s) {
    rec.location_marginal[static_cast<Index>(tmaze::location_of(s))] += bma[s];
    rec.context_marginal[static_cast<Index>(tmaze::context_of(s))] += bma[s];
  }
}

}  // namespace

TrialRecord run_trial(const GenerativeModel& model, tmaze::TmazeEnv& env, const ExperimentConfig& config,
                      std::mt19937_64& tie_rng, std::size_t trial_index) {
  const auto prior = state_prior_for(model);
  if (needs_state_prior(config.agent) && !prior) {
    throw ConfigError("agent '" + std::string(agent_name(config.agent)) + "' needs a prior over states");
  }
  const auto& policies = model.policies;

  TrialRecord trial;
  trial.trial = trial_index;
  trial.context = env.context();

  std::vector<Observation> observed;
  for (std::size_t t = 1; t <= model.horizon; ++t) {
    const Index o = t == 1 ? env.observe() : tmaze::env_step(env, trial.actions.back());
    observed.push_back({t, o});
    trial.score_delta += tmaze::score_outcome(o);

    EpochRecord rec;
    rec.epoch = t;
    rec.observation = o;
    rec.beliefs.observed = observed;
    rec.beliefs.per_policy_states.reserve(policies.size());
    for (const auto& policy : policies) {
      rec.beliefs.per_policy_states.push_back(infer_states(model, policy, observed).states);
    }

    PlanContext ctx;
    ctx.current_epoch = t;
    ctx.executed_actions = trial.actions;
    ctx.precision = config.precision;
    ctx.tie_tolerance = config.tie_tolerance;
    ctx.prior_states_for_risk = prior;

    std::vector<double> g(policies.size(), 0.0);
    if (t < model.horizon) {
      rec.evaluations.reserve(policies.size());
      for (Index k = 0; k < policies.size(); ++k) {
        rec.evaluations.push_back(
            expected_free_energy(model, rec.beliefs.per_policy_states[k][t - 1], policies[k], ctx, config.agent));
        g[k] = rec.evaluations.back().total;
      }
    }
    rec.beliefs.policy_posterior = policy_posterior(g, policies, ctx);
    fill_marginals(rec);

    if (t < model.horizon) {
      rec.action_marginal = action_marginal(rec.beliefs.policy_posterior, policies, t, model.num_actions);
      rec.action = select_action(*rec.action_marginal, tie_rng, config.tie_tolerance);
      trial.actions.push_back(*rec.action);
    }
    trial.epochs.push_back(std::move(rec));
  }
  return trial;
}

ExperimentRecord run_experiment(const ExperimentConfig& config, const GenerativeModel& model,
                                const tmaze::ContextSchedule& schedule) {
  check_config(config);
  if (config.trials > schedule.size()) {
    throw ConfigError("schedule covers " + std::to_string(schedule.size()) + " trials, " +
                      std::to_string(config.trials) + " requested");
  }
  const auto start = std::chrono::steady_clock::now();

  ExperimentRecord record;
  record.config = config;
  record.trials.reserve(config.trials);
  tmaze::TmazeEnv env(Context::White, 0, config.reward_prob);
  int cumulative = 0;
  for (std::size_t trial = 1; trial <= config.trials; ++trial) {
    const auto streams = derive_streams(config.seed, trial);
    env.reset(tmaze::context_at(schedule, trial), streams.environment);
    std::mt19937_64 tie_rng(streams.tie_break);
    TrialRecord rec = run_trial(model, env, config, tie_rng, trial);
    cumulative += rec.score_delta;
    rec.cumulative_score = cumulative;
    record.trials.push_back(std::move(rec));
  }
  record.final_score = cumulative;
  record.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return record;
}

ExperimentRecord run_experiment(const ExperimentConfig& config) {
  check_config(config);
  const GenerativeModel model = prepare_model(config);
  const auto schedule =
      config.schedule_path ? tmaze::ContextSchedule::from_file(*config.schedule_path) : tmaze::ContextSchedule::standard();
  return run_experiment(config, model, schedule);
}

// ---------------------------------------------------------------------------
// Output tables

namespace {

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
};

json real(double v) { return std::stod(format_real(v)); }

std::string cell_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  return format_real(v.get<double>());
}

std::string action_label(Index a) { return "go-" + std::string(tmaze::location_name(static_cast<tmaze::Location>(a))); }

std::vector<Table> record_tables(const ExperimentRecord& record) {
  Table trials{"trials", {"trial", "context"}, {}};
  const std::size_t num_actions = record.trials.empty() ? 0 : record.trials.front().actions.size();
  for (std::size_t i = 1; i <= num_actions; ++i) trials.columns.push_back("action" + std::to_string(i));
  trials.columns.insert(trials.columns.end(), {"score", "cumulative"});

  Table beliefs{"beliefs",
                {"trial", "epoch", "loc_center", "loc_left", "loc_right", "loc_cue", "ctx_white", "ctx_black"},
                {}};

  Table policies{"policies", {"trial"}, {}};
  const std::size_t num_policies =
      record.trials.empty() ? 0 : record.trials.front().decision_posterior().size();
  for (std::size_t k = 1; k <= num_policies; ++k) policies.columns.push_back("policy_" + std::to_string(k));

  Table breakdown{"breakdown", {"trial", "epoch", "policy", "risk", "ambiguity", "intrinsic", "extrinsic", "G"}, {}};

  for (const auto& t : record.trials) {
    std::vector<json> row{t.trial, std::string(tmaze::context_name(t.context))};
    for (Index a : t.actions) row.emplace_back(action_label(a));
    row.emplace_back(t.score_delta);
    row.emplace_back(t.cumulative_score);
    trials.rows.push_back(std::move(row));

    for (const auto& e : t.epochs) {
      std::vector<json> b{t.trial, e.epoch};
      for (double v : e.location_marginal) b.push_back(real(v));
      for (double v : e.context_marginal) b.push_back(real(v));
      beliefs.rows.push_back(std::move(b));

      for (std::size_t k = 0; k < e.evaluations.size(); ++k) {
        EfeBreakdown sum;
        for (const auto& step : e.evaluations[k].steps) {
          sum.risk_states += step.risk_states;
          sum.ambiguity += step.ambiguity;
          sum.intrinsic += step.intrinsic;
          sum.extrinsic += step.extrinsic;
        }
        breakdown.rows.push_back({t.trial, e.epoch, k + 1, real(sum.risk_states), real(sum.ambiguity),
                                  real(sum.intrinsic), real(sum.extrinsic), real(e.evaluations[k].total)});
      }
    }

    std::vector<json> p{t.trial};
    for (double v : t.decision_posterior()) p.push_back(real(v));
    policies.rows.push_back(std::move(p));
  }
  return {std::move(trials), std::move(beliefs), std::move(policies), std::move(breakdown)};
}

json config_json(const ExperimentConfig& c) {
  json j;
  j["agent"] = std::string(agent_name(c.agent));
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["precision"] = real(c.precision);
  j["tie_tolerance"] = real(c.tie_tolerance);
  j["reward_prob"] = real(c.reward_prob);
  j["model"] = c.model_path ? c.model_path->string() : std::string("builtin:tmaze");
  j["schedule"] = c.schedule_path ? c.schedule_path->string() : std::string("builtin:standard");
  return j;
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string to_csv(const std::vector<std::string>& columns, const std::vector<std::vector<json>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + cell_text(row[i]);
    out += '\n';
  }
  return out;
}

}  // namespace

void write_records(const ExperimentRecord& record, const std::filesystem::path& output_dir, OutputFormat format) {
  ensure_dir(output_dir);
  const auto tables = record_tables(record);
  const json config = config_json(record.config);

  if (format == OutputFormat::Csv) {
    for (const auto& t : tables) write_text(output_dir / (t.name + ".csv"), to_csv(t.columns, t.rows));
    std::vector<std::vector<json>> rows;
    for (const auto& [key, value] : config.items()) rows.push_back({key, value});
    rows.push_back({"final_score", record.final_score});
    write_text(output_dir / "config.csv", to_csv({"key", "value"}, rows));
    return;
  }

  json doc;
  doc["config"] = config;
  doc["final_score"] = record.final_score;
  for (const auto& t : tables) {
    json rows = json::array();
    for (const auto& row : t.rows) {
      json obj = json::object();
      for (std::size_t i = 0; i < row.size(); ++i) obj[t.columns[i]] = row[i];
      rows.push_back(std::move(obj));
    }
    doc[t.name] = std::move(rows);
  }
  write_text(output_dir / "records.json", doc.dump(2) + "\n");
}

void emit_plot_data(const ExperimentRecord& record, const std::filesystem::path& output_dir) {
  if (record.trials.empty()) throw InvalidInputError("emit_plot_data: record has no trials");
  ensure_dir(output_dir);
  const TrialRecord& first = record.trials.front();
  const std::size_t horizon = first.epochs.size();

  // Beliefs about every epoch τ (rows) as held at each time t (columns).
  std::vector<std::string> time_cols{"epoch", "state"};
  for (std::size_t t = 1; t <= horizon; ++t) time_cols.push_back("t" + std::to_string(t));
  std::vector<std::vector<json>> position;
  std::vector<std::vector<json>> context;
  for (std::size_t tau = 1; tau <= horizon; ++tau) {
    std::vector<std::vector<double>> loc(tmaze::kNumLocations, std::vector<double>(horizon, 0.0));
    std::vector<std::vector<double>> ctx(tmaze::kNumContexts, std::vector<double>(horizon, 0.0));
    for (std::size_t t = 1; t <= horizon; ++t) {
      const Categorical bma = bma_beliefs(first.epochs[t - 1].beliefs, tau);
      for (Index s = 0; s < bma.size(); ++s) {
        loc[static_cast<Index>(tmaze::location_of(s))][t - 1] += bma[s];
        ctx[static_cast<Index>(tmaze::context_of(s))][t - 1] += bma[s];
      }
    }
    for (Index l = 0; l < tmaze::kNumLocations; ++l) {
      std::vector<json> row{tau, std::string(tmaze::location_name(static_cast<tmaze::Location>(l)))};
      for (double v : loc[l]) row.push_back(real(v));
      position.push_back(std::move(row));
    }
    for (Index c = 0; c < tmaze::kNumContexts; ++c) {
      std::vector<json> row{tau, std::string(tmaze::context_name(static_cast<Context>(c)))};
      for (double v : ctx[c]) row.push_back(real(v));
      context.push_back(std::move(row));
    }
  }
  write_text(output_dir / "trial1_position.csv", to_csv(time_cols, position));
  write_text(output_dir / "trial1_context.csv", to_csv(time_cols, context));

  std::vector<std::string> action_cols{"epoch"};
  for (Index a = 0; a < tmaze::kNumActions; ++a) action_cols.push_back(action_label(a));
  action_cols.emplace_back("selected");
  std::vector<std::vector<json>> actions;
  for (const auto& e : first.epochs) {
    if (!e.action_marginal) continue;
    std::vector<json> row{e.epoch};
    for (double v : *e.action_marginal) row.push_back(real(v));
    row.emplace_back(action_label(*e.action));
    actions.push_back(std::move(row));
  }
  write_text(output_dir / "trial1_actions.csv", to_csv(action_cols, actions));

  std::vector<std::string> policy_cols{"trial"};
  const std::size_t num_policies = first.decision_posterior().size();
  for (std::size_t k = 1; k <= num_policies; ++k) policy_cols.push_back("policy_" + std::to_string(k));
  std::vector<std::vector<json>> policy_rows;
  std::vector<std::vector<json>> score_rows;
  std::vector<tmaze::Context> contexts;
  for (const auto& t : record.trials) {
    std::vector<json> row{t.trial};
    for (double v : t.decision_posterior()) row.push_back(real(v));
    policy_rows.push_back(std::move(row));
    score_rows.push_back({t.trial, std::string(tmaze::context_name(t.context)), t.cumulative_score});
    contexts.push_back(t.context);
  }
  write_text(output_dir / "run_policies.csv", to_csv(policy_cols, policy_rows));
  write_text(output_dir / "run_score.csv", to_csv({"trial", "context", "cumulative"}, score_rows));

  std::vector<std::vector<json>> bands;
  for (const auto& [lo, hi] : tmaze::ContextSchedule(contexts).black_bands()) bands.push_back({lo, hi});
  write_text(output_dir / "run_context_bands.csv", to_csv({"start", "stop"}, bands));
}

}  // namespace aif::harness
