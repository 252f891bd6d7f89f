#include "aif/cli.hpp"

#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "aif/errors.hpp"

namespace aif::cli {

namespace {

struct RawFlags {
  std::string agent = "efe";
  std::string format = "csv";
  std::string model;
  std::string schedule;
  std::string out;
  std::string beliefs;
  std::string history;
};

struct App {
  CLI::App app{"Discrete-state active inference engine and maze foraging harness", "aif"};
  CLI::App* run = nullptr;
  CLI::App* trial = nullptr;
  CLI::App* decompose = nullptr;
  CLI::App* validate = nullptr;
};

void add_common(CLI::App* sub, CliOptions& opts, RawFlags& raw) {
  sub->add_option("--agent", raw.agent, "Objective: efe | eig | eu | eu-states | klc");
  sub->add_option("--model", raw.model, "Model spec file (default: built-in maze)");
  sub->add_option("--precision", opts.config.precision, "Softmax precision over policies");
  sub->add_option("--reward-prob", opts.config.reward_prob, "Reward probability of the built-in maze");
}

void add_experiment(CLI::App* sub, CliOptions& opts, RawFlags& raw) {
  sub->add_option("--trials", opts.config.trials, "Number of trials");
  sub->add_option("--seed", opts.config.seed, "Master random seed");
  sub->add_option("--tie-tolerance", opts.config.tie_tolerance, "Probability gap treated as a tie");
  sub->add_option("--schedule", raw.schedule, "Context schedule file (one white/black per line)");
  sub->add_option("--out", raw.out, "Output directory");
  sub->add_option("--format", raw.format, "Output format: csv | json");
}

void build(App& a, CliOptions& opts, RawFlags& raw) {
  a.app.require_subcommand(1);
  a.run = a.app.add_subcommand("run", "Run a full experiment and write result tables");
  a.trial = a.app.add_subcommand("trial", "Run a single trial and print every planning step");
  a.decompose = a.app.add_subcommand("decompose", "Print the expected free energy breakdown per policy");
  a.validate = a.app.add_subcommand("validate", "Check a model spec file");

  for (auto* sub : {a.run, a.trial, a.decompose}) add_common(sub, opts, raw);
  add_experiment(a.run, opts, raw);
  add_experiment(a.trial, opts, raw);
  a.trial->add_option("--trial-index", opts.trial_index, "Scheduled trial to run (1-based)");
  a.decompose->add_option("--beliefs", raw.beliefs, "Comma-separated state weights at epoch t (default: D)");
  a.decompose->add_option("--epoch", opts.epoch, "Current epoch t");
  a.decompose->add_option("--history", raw.history, "Comma-separated actions executed before t");
  a.validate->add_option("--model", raw.model, "Model spec file (default: built-in maze)");
}

template <typename T>
std::vector<T> parse_list(const std::string& text, const char* flag) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::stringstream is(item);
    T v{};
    if (!(is >> v) || !(is >> std::ws).eof()) {
      throw UsageError(std::string(flag) + ": malformed entry '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

void finish(const App& a, CliOptions& opts, const RawFlags& raw) {
  if (a.run->parsed()) opts.command = Subcommand::Run;
  if (a.trial->parsed()) opts.command = Subcommand::Trial;
  if (a.decompose->parsed()) opts.command = Subcommand::Decompose;
  if (a.validate->parsed()) opts.command = Subcommand::Validate;

  const auto agent = objective_from_agent_name(raw.agent);
  if (!agent) throw UsageError("unknown agent '" + raw.agent + "' (expected efe, eig, eu, eu-states or klc)");
  opts.config.agent = *agent;

  if (raw.format == "csv") {
    opts.config.format = harness::OutputFormat::Csv;
  } else if (raw.format == "json") {
    opts.config.format = harness::OutputFormat::Json;
  } else {
    throw UsageError("unknown format '" + raw.format + "' (expected csv or json)");
  }

  if (!raw.model.empty()) opts.config.model_path = raw.model;
  if (!raw.schedule.empty()) opts.config.schedule_path = raw.schedule;
  if (!raw.out.empty()) {
    opts.config.output_dir = raw.out;
  }
  if (opts.config.trials < 1) throw UsageError("--trials must be at least 1");
  if (!(opts.config.precision >= 0.0)) throw UsageError("--precision must be nonnegative");
  if (!(opts.config.reward_prob >= 0.0 && opts.config.reward_prob <= 1.0)) {
    throw UsageError("--reward-prob must lie in [0, 1]");
  }
  if (!(opts.config.tie_tolerance >= 0.0)) throw UsageError("--tie-tolerance must be nonnegative");
  if (opts.trial_index < 1) throw UsageError("--trial-index must be at least 1");
  if (opts.epoch < 1) throw UsageError("--epoch must be at least 1");
  if (!raw.beliefs.empty()) opts.beliefs = parse_list<double>(raw.beliefs, "--beliefs");
  if (!raw.history.empty()) opts.history = parse_list<Index>(raw.history, "--history");
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string policy_label(const GenerativeModel& model, const Policy& p) {
  std::string out = "(";
  for (std::size_t i = 0; i < p.actions.size(); ++i) {
    if (i) out += ",";
    out += model.action_labels.empty() ? std::to_string(p.actions[i]) : model.action_labels[p.actions[i]];
  }
  return out + ")";
}

std::string probs_text(std::span<const double> p) {
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) out += (i ? " " : "") + harness::format_real(p[i]);
  return out;
}

GenerativeModel model_for(const CliOptions& opts) {
  GenerativeModel model = opts.config.model_path ? load_spec(*opts.config.model_path)
                                                 : tmaze::build_tmaze_model(opts.config.reward_prob);
  require_valid(model);
  return model;
}

int cmd_validate(const CliOptions& opts, std::ostream& out) {
  // Schema problems and load-time invariant violations surface as exceptions.
  const GenerativeModel model =
      opts.config.model_path ? load_spec(*opts.config.model_path) : tmaze::build_tmaze_model(opts.config.reward_prob);
  const auto violations = validate(model);
  if (!violations.empty()) {
    for (const auto& v : violations) out << v << "\n";
    return kModel;
  }
  out << "valid: " << model.num_states << " states, " << model.num_outcomes << " outcomes, " << model.num_actions
      << " actions, horizon " << model.horizon << ", " << model.policies.size() << " policies\n";
  return kOk;
}

int cmd_decompose(const CliOptions& opts, std::ostream& out) {
  const GenerativeModel model = model_for(opts);
  if (opts.epoch >= model.horizon) throw UsageError("--epoch must be below the horizon");
  if (opts.history.size() + 1 != opts.epoch) throw UsageError("--history must list epoch-1 actions");
  const Categorical q_now = opts.beliefs.empty() ? normalize(model.state_prior) : normalize(opts.beliefs);
  if (q_now.size() != model.num_states) throw UsageError("--beliefs must have one weight per state");

  PlanContext ctx;
  ctx.current_epoch = opts.epoch;
  ctx.executed_actions = opts.history;
  ctx.precision = opts.config.precision;
  ctx.prior_states_for_risk = harness::state_prior_for(model);
  if (needs_state_prior(opts.config.agent) && !ctx.prior_states_for_risk) {
    throw ConfigError("agent '" + std::string(agent_name(opts.config.agent)) +
                      "' needs a prior over states: the model has no 'state_preferences' entry");
  }

  std::vector<double> g;
  std::vector<PolicyEvaluation> evals;
  for (const auto& policy : model.policies) {
    evals.push_back(expected_free_energy(model, q_now, policy, ctx, opts.config.agent));
    g.push_back(evals.back().total);
  }
  const Categorical post = policy_posterior(g, model.policies, ctx);

  out << "objective: " << to_string(opts.config.agent) << ", epoch " << opts.epoch << "\n";
  out << "policy,actions,tau,risk,ambiguity,intrinsic,extrinsic,evidence_bound,G\n";
  for (std::size_t k = 0; k < evals.size(); ++k) {
    for (const auto& s : evals[k].steps) {
      out << k + 1 << "," << policy_label(model, model.policies[k]) << "," << s.timestep << ","
          << harness::format_real(s.risk_states) << "," << harness::format_real(s.ambiguity) << ","
          << harness::format_real(s.intrinsic) << "," << harness::format_real(s.extrinsic) << ","
          << harness::format_real(s.evidence_bound) << "," << harness::format_real(s.total) << "\n";
    }
  }
  out << "policy,actions,G_total,posterior\n";
  for (std::size_t k = 0; k < evals.size(); ++k) {
    out << k + 1 << "," << policy_label(model, model.policies[k]) << "," << harness::format_real(evals[k].total)
        << "," << harness::format_real(post[k]) << "\n";
  }
  return kOk;
}

int cmd_trial(const CliOptions& opts, std::ostream& out) {
  const GenerativeModel model = harness::prepare_model(opts.config);
  const auto schedule = opts.config.schedule_path ? tmaze::ContextSchedule::from_file(*opts.config.schedule_path)
                                                  : tmaze::ContextSchedule::standard();
  const auto streams = harness::derive_streams(opts.config.seed, opts.trial_index);
  tmaze::TmazeEnv env(tmaze::context_at(schedule, opts.trial_index), streams.environment, opts.config.reward_prob);
  std::mt19937_64 tie_rng(streams.tie_break);
  const auto rec = harness::run_trial(model, env, opts.config, tie_rng, opts.trial_index);

  out << "trial " << rec.trial << " (" << tmaze::context_name(rec.context) << "), agent "
      << agent_name(opts.config.agent) << "\n";
  for (const auto& e : rec.epochs) {
    out << "\nepoch " << e.epoch << ": observed " << tmaze::outcome_name(e.observation) << "\n";
    out << "  location [center left right cue]: " << probs_text(e.location_marginal) << "\n";
    out << "  context  [white black]:           " << probs_text(e.context_marginal) << "\n";
    if (!e.evaluations.empty()) {
      out << "  " << pad("policy", 18) << pad("risk", 14) << pad("ambiguity", 14) << pad("intrinsic", 14)
          << pad("extrinsic", 14) << pad("G", 14) << "Q(pi)\n";
      for (std::size_t k = 0; k < e.evaluations.size(); ++k) {
        EfeBreakdown sum;
        for (const auto& s : e.evaluations[k].steps) {
          sum.risk_states += s.risk_states;
          sum.ambiguity += s.ambiguity;
          sum.intrinsic += s.intrinsic;
          sum.extrinsic += s.extrinsic;
        }
        out << "  " << pad(policy_label(model, model.policies[k]), 18)
            << pad(harness::format_real(sum.risk_states), 14) << pad(harness::format_real(sum.ambiguity), 14)
            << pad(harness::format_real(sum.intrinsic), 14) << pad(harness::format_real(sum.extrinsic), 14)
            << pad(harness::format_real(e.evaluations[k].total), 14)
            << harness::format_real(e.beliefs.policy_posterior[k]) << "\n";
      }
    }
    if (e.action) {
      out << "  action marginal: " << probs_text(e.action_marginal->probs()) << "\n";
      out << "  selected: go-" << tmaze::location_name(static_cast<tmaze::Location>(*e.action)) << "\n";
    }
  }
  out << "\nscore " << rec.score_delta << "\n";
  return kOk;
}

int cmd_run(const CliOptions& opts, std::ostream& out) {
  const auto record = harness::run_experiment(opts.config);
  harness::write_records(record, opts.config.output_dir, opts.config.format);
  harness::emit_plot_data(record, opts.config.output_dir);
  out << "agent " << agent_name(opts.config.agent) << ": " << record.trials.size() << " trials, final score "
      << record.final_score << " (" << std::fixed << std::setprecision(3) << record.wall_seconds << " s), output in "
      << opts.config.output_dir.string() << "\n";
  return kOk;
}

}  // namespace

CliOptions parse_cli(int argc, const char* const* argv) {
  CliOptions opts;
  RawFlags raw;
  App a;
  build(a, opts, raw);
  try {
    a.app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  finish(a, opts, raw);
  return opts;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CliOptions opts;
  RawFlags raw;
  App a;
  build(a, opts, raw);
  try {
    a.app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << a.app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << a.app.help();
    return kUsage;
  }

  try {
    finish(a, opts, raw);
    switch (opts.command) {
      case Subcommand::Run: return cmd_run(opts, out);
      case Subcommand::Trial: return cmd_trial(opts, out);
      case Subcommand::Decompose: return cmd_decompose(opts, out);
      case Subcommand::Validate: return cmd_validate(opts, out);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kModel;
  }
  return kOk;
}

}  // namespace aif::cli
