#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "aif/numerics.hpp"

namespace aif {

/// Fixed action sequence; actions[k] moves the agent from epoch k+1 to k+2.
struct Policy {
  std::vector<Index> actions;

  bool operator==(const Policy&) const = default;
};

/// Ordered, nonempty list of distinct policies.
class PolicySet {
 public:
  /// Throws InvalidInputError on an empty list or duplicate policies.
  explicit PolicySet(std::vector<Policy> policies);

  std::size_t size() const { return policies_.size(); }
  const Policy& operator[](Index i) const { return policies_[i]; }
  const std::vector<Policy>& policies() const { return policies_; }
  auto begin() const { return policies_.begin(); }
  auto end() const { return policies_.end(); }

  bool operator==(const PolicySet&) const = default;

 private:
  std::vector<Policy> policies_;
};

/// Discrete POMDP generative model with a single (flattened) state factor.
///
/// Probabilities are stored as plain arrays so that malformed models can be
/// represented and reported by validate(); every downstream operation
/// expects a model for which validate() returns no violations.
struct GenerativeModel {
  std::size_t num_states = 0;
  std::size_t num_outcomes = 0;
  std::size_t num_actions = 0;
  std::size_t horizon = 0;

  Matrix likelihood;               ///< A: outcomes × states, column-stochastic
  std::vector<Matrix> transitions; ///< B[u]: states × states, column-stochastic
  std::vector<double> preferences; ///< C: raw utilities over outcomes (nats, unnormalized)
  std::vector<double> state_prior; ///< D: initial state distribution
  PolicySet policies{{Policy{}}};

  /// Optional prior over states used by the state-utility and risk-only objectives.
  std::optional<std::vector<double>> state_preferences;

  std::vector<std::string> state_labels;
  std::vector<std::string> outcome_labels;
  std::vector<std::string> action_labels;
};

/// Every invariant violation in the model, each naming its location.
/// An empty result means the model is valid.
std::vector<std::string> validate(const GenerativeModel& model);

/// Throws ModelError listing all violations when validate() is not empty.
void require_valid(const GenerativeModel& model);

/// Parse a model spec (JSON key-value tree). Throws SchemaError for
/// malformed content, ModelError for invariant violations.
GenerativeModel parse_spec(const std::string& text);
/// Serialize a model to spec text with round-trip exact numbers.
std::string format_spec(const GenerativeModel& model);

/// Read a spec file. Throws IoError if the file cannot be read.
GenerativeModel load_spec(const std::filesystem::path& path);
/// Write a spec file. Throws IoError on failure.
void save_spec(const GenerativeModel& model, const std::filesystem::path& path);

}  // namespace aif
