#include "aif/tmaze.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <string>

#include "aif/errors.hpp"

namespace aif::tmaze {

std::string_view location_name(Location loc) {
  switch (loc) {
    case Location::Center: return "center";
    case Location::Left: return "left";
    case Location::Right: return "right";
    case Location::Cue: return "cue";
  }
  return "?";
}

std::string_view context_name(Context ctx) { return ctx == Context::White ? "white" : "black"; }

std::string_view outcome_name(Index outcome) {
  static constexpr std::string_view kNames[] = {"center",     "left-cheese", "left-null", "right-cheese",
                                                "right-null", "cue-white",   "cue-black"};
  return outcome < kNumOutcomes ? kNames[outcome] : "?";
}

PolicySet tmaze_policies() {
  return PolicySet({Policy{{0, 0}}, Policy{{0, 1}}, Policy{{0, 2}}, Policy{{0, 3}}, Policy{{1, 1}}, Policy{{2, 2}},
                    Policy{{3, 0}}, Policy{{3, 1}}, Policy{{3, 2}}, Policy{{3, 3}}});
}

namespace {

Matrix tmaze_likelihood(double p) {
  Matrix a(kNumOutcomes, kNumStates);
  for (Index c = 0; c < kNumContexts; ++c) {
    const auto ctx = static_cast<Context>(c);
    const double left_cheese = ctx == Context::White ? p : 1.0 - p;
    const double right_cheese = ctx == Context::Black ? p : 1.0 - p;
    a(outcome::kCenter, state_index(Location::Center, ctx)) = 1.0;
    a(outcome::kLeftCheese, state_index(Location::Left, ctx)) = left_cheese;
    a(outcome::kLeftNull, state_index(Location::Left, ctx)) = 1.0 - left_cheese;
    a(outcome::kRightCheese, state_index(Location::Right, ctx)) = right_cheese;
    a(outcome::kRightNull, state_index(Location::Right, ctx)) = 1.0 - right_cheese;
    a(ctx == Context::White ? outcome::kCueWhite : outcome::kCueBlack, state_index(Location::Cue, ctx)) = 1.0;
  }
  return a;
}

Location move(Location from, Index action) {
  if (from == Location::Left || from == Location::Right) return from;
  return static_cast<Location>(action);
}

}  // namespace

GenerativeModel build_tmaze_model(double reward_prob) {
  if (!(reward_prob >= 0.0 && reward_prob <= 1.0)) throw InvalidInputError("reward_prob must lie in [0, 1]");

  GenerativeModel m;
  m.num_states = kNumStates;
  m.num_outcomes = kNumOutcomes;
  m.num_actions = kNumActions;
  m.horizon = kHorizon;
  m.likelihood = tmaze_likelihood(reward_prob);

  for (Index u = 0; u < kNumActions; ++u) {
    Matrix b(kNumStates, kNumStates);
    for (Index s = 0; s < kNumStates; ++s) {
      b(state_index(move(location_of(s), u), context_of(s)), s) = 1.0;
    }
    m.transitions.push_back(std::move(b));
  }

  m.preferences.assign(kNumOutcomes, 0.0);
  m.preferences[outcome::kLeftCheese] = kUtility;
  m.preferences[outcome::kLeftNull] = -kUtility;
  m.preferences[outcome::kRightCheese] = kUtility;
  m.preferences[outcome::kRightNull] = -kUtility;

  std::vector<double> counts(kNumStates, 0.0);
  counts[state_index(Location::Center, Context::White)] = kPriorCount;
  counts[state_index(Location::Center, Context::Black)] = kPriorCount;
  m.state_prior = normalize(counts).vec();

  m.policies = tmaze_policies();

  for (Index s = 0; s < kNumStates; ++s) {
    m.state_labels.push_back(std::string(location_name(location_of(s))) + "/" +
                             std::string(context_name(context_of(s))));
  }
  for (Index o = 0; o < kNumOutcomes; ++o) m.outcome_labels.emplace_back(outcome_name(o));
  for (Index u = 0; u < kNumActions; ++u) {
    m.action_labels.push_back("go-" + std::string(location_name(static_cast<Location>(u))));
  }
  return m;
}

ContextSchedule::ContextSchedule(std::vector<Context> contexts) : contexts_(std::move(contexts)) {
  if (contexts_.empty()) throw InvalidInputError("context schedule is empty");
}

ContextSchedule ContextSchedule::standard() {
  std::vector<Context> c(kTrials, Context::White);
  for (std::size_t trial = 10; trial <= 12; ++trial) c[trial - 1] = Context::Black;
  c[30 - 1] = Context::Black;
  return ContextSchedule(std::move(c));
}

ContextSchedule ContextSchedule::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open schedule '" + path.string() + "'");
  std::vector<Context> contexts;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line.erase(std::remove_if(line.begin(), line.end(), [](unsigned char ch) { return std::isspace(ch); }),
               line.end());
    if (line.empty()) continue;
    if (line == "white" || line == "0") {
      contexts.push_back(Context::White);
    } else if (line == "black" || line == "1") {
      contexts.push_back(Context::Black);
    } else {
      throw SchemaError("schedule line " + std::to_string(lineno) + ": unknown context '" + line + "'");
    }
  }
  return ContextSchedule(std::move(contexts));
}

std::vector<std::pair<std::size_t, std::size_t>> ContextSchedule::black_bands() const {
  std::vector<std::pair<std::size_t, std::size_t>> bands;
  for (std::size_t i = 0; i < contexts_.size(); ++i) {
    if (contexts_[i] != Context::Black) continue;
    const std::size_t trial = i + 1;
    if (!bands.empty() && bands.back().second + 1 == trial) {
      bands.back().second = trial;
    } else {
      bands.emplace_back(trial, trial);
    }
  }
  return bands;
}

Context context_at(const ContextSchedule& schedule, std::size_t trial) {
  if (trial < 1 || trial > schedule.size()) {
    throw InvalidInputError("trial " + std::to_string(trial) + " outside schedule 1.." +
                            std::to_string(schedule.size()));
  }
  return schedule.contexts()[trial - 1];
}

TmazeEnv::TmazeEnv(Context context, std::uint64_t seed, double reward_prob)
    : context_(context), reward_prob_(reward_prob), rng_(seed) {
  if (!(reward_prob >= 0.0 && reward_prob <= 1.0)) throw InvalidInputError("reward_prob must lie in [0, 1]");
  likelihood_ = tmaze_likelihood(reward_prob);
}

void TmazeEnv::reset(Context context, std::uint64_t seed) {
  location_ = Location::Center;
  context_ = context;
  rng_.seed(seed);
}

Index TmazeEnv::observe() {
  const Index s = state_index(location_, context_);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng_);
  double acc = 0.0;
  Index last_possible = 0;
  for (Index o = 0; o < kNumOutcomes; ++o) {
    const double p = likelihood_(o, s);
    if (p <= 0.0) continue;
    acc += p;
    last_possible = o;
    if (u < acc) return o;
  }
  return last_possible;
}

Index TmazeEnv::step(Index action) {
  if (action >= kNumActions) throw InvalidInputError("action " + std::to_string(action) + " out of range");
  location_ = move(location_, action);
  return observe();
}

Index env_step(TmazeEnv& env, Index action) { return env.step(action); }

int score_outcome(Index outcome) {
  switch (outcome) {
    case outcome::kLeftCheese:
    case outcome::kRightCheese:
      return static_cast<int>(kUtility);
    case outcome::kLeftNull:
    case outcome::kRightNull:
      return -static_cast<int>(kUtility);
    case outcome::kCenter:
    case outcome::kCueWhite:
    case outcome::kCueBlack:
      return 0;
    default:
      throw InvalidInputError("outcome " + std::to_string(outcome) + " out of range");
  }
}

}  // namespace aif::tmaze
