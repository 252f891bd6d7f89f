#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string_view>
#include <vector>

#include "aif/model.hpp"

namespace aif::tmaze {

// Frozen index conventions. Action u means "go to location u".
enum class Location : Index { Center = 0, Left = 1, Right = 2, Cue = 3 };
enum class Context : Index { White = 0, Black = 1 };

inline constexpr std::size_t kNumLocations = 4;
inline constexpr std::size_t kNumContexts = 2;
inline constexpr std::size_t kNumStates = kNumLocations * kNumContexts;
inline constexpr std::size_t kNumOutcomes = 7;
inline constexpr std::size_t kNumActions = 4;
inline constexpr std::size_t kHorizon = 3;
inline constexpr std::size_t kTrials = 50;
inline constexpr double kDefaultRewardProb = 0.98;
inline constexpr double kUtility = 6.0;
inline constexpr double kPriorCount = 128.0;

namespace outcome {
inline constexpr Index kCenter = 0;
inline constexpr Index kLeftCheese = 1;
inline constexpr Index kLeftNull = 2;
inline constexpr Index kRightCheese = 3;
inline constexpr Index kRightNull = 4;
inline constexpr Index kCueWhite = 5;
inline constexpr Index kCueBlack = 6;
}  // namespace outcome

constexpr Index state_index(Location loc, Context ctx) {
  return static_cast<Index>(ctx) * kNumLocations + static_cast<Index>(loc);
}
constexpr Location location_of(Index state) { return static_cast<Location>(state % kNumLocations); }
constexpr Context context_of(Index state) { return static_cast<Context>(state / kNumLocations); }

/// Arm holding the cheese: white ⇒ left, black ⇒ right.
constexpr Location cheese_arm(Context ctx) { return ctx == Context::White ? Location::Left : Location::Right; }

std::string_view location_name(Location loc);
std::string_view context_name(Context ctx);
std::string_view outcome_name(Index outcome);

/// Policies in reporting order: (0,0) (0,1) (0,2) (0,3) (1,1) (2,2) (3,0) (3,1) (3,2) (3,3).
PolicySet tmaze_policies();

/// Agent generative model for the maze. All contingencies are exact except
/// the context, which starts at even odds.
GenerativeModel build_tmaze_model(double reward_prob = kDefaultRewardProb);

/// Per-trial true context, 1-based.
class ContextSchedule {
 public:
  explicit ContextSchedule(std::vector<Context> contexts);

  /// White for trials 1–9, black 10–12, white 13–29, black 30, white 31–50.
  static ContextSchedule standard();
  /// One context per non-empty line: "white"/"black" or "0"/"1"; '#' starts a comment.
  static ContextSchedule from_file(const std::filesystem::path& path);

  std::size_t size() const { return contexts_.size(); }
  const std::vector<Context>& contexts() const { return contexts_; }

  /// Maximal runs of black trials as inclusive (first, last) pairs.
  std::vector<std::pair<std::size_t, std::size_t>> black_bands() const;

 private:
  std::vector<Context> contexts_;
};

/// Throws InvalidInputError when trial is outside 1..schedule.size().
Context context_at(const ContextSchedule& schedule, std::size_t trial);

/// Ground-truth maze. Arms are absorbing; outcomes are sampled from the
/// same likelihood the agent's model uses.
class TmazeEnv {
 public:
  TmazeEnv(Context context, std::uint64_t seed, double reward_prob = kDefaultRewardProb);

  /// Back to the center with a new context and outcome stream.
  void reset(Context context, std::uint64_t seed);

  /// Sample the outcome at the current location.
  Index observe();
  /// Move per the action then sample an outcome.
  Index step(Index action);

  Location location() const { return location_; }
  Context context() const { return context_; }
  double reward_prob() const { return reward_prob_; }

 private:
  Location location_ = Location::Center;
  Context context_ = Context::White;
  double reward_prob_;
  Matrix likelihood_;
  std::mt19937_64 rng_;
};

/// Free-function form of TmazeEnv::step.
Index env_step(TmazeEnv& env, Index action);

/// +6 for cheese, −6 for an empty arm, 0 for center and cue outcomes.
int score_outcome(Index outcome);

}  // namespace aif::tmaze
