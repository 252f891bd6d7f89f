#include "aif/model.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "aif/errors.hpp"

namespace aif {

using nlohmann::json;

PolicySet::PolicySet(std::vector<Policy> policies) : policies_(std::move(policies)) {
  if (policies_.empty()) throw InvalidInputError("PolicySet: no policies");
  std::set<std::vector<Index>> seen;
  for (std::size_t i = 0; i < policies_.size(); ++i) {
    if (!seen.insert(policies_[i].actions).second) {
      throw InvalidInputError("PolicySet: policy " + std::to_string(i) + " is a duplicate");
    }
  }
}

namespace {

std::string fmt_num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

void check_stochastic(const Matrix& m, std::size_t rows, std::size_t cols, const std::string& name,
                      std::vector<std::string>& out) {
  if (m.rows != rows || m.cols != cols || m.data.size() != rows * cols) {
    out.push_back(name + ": shape " + std::to_string(m.rows) + "x" + std::to_string(m.cols) + ", expected " +
                  std::to_string(rows) + "x" + std::to_string(cols));
    return;
  }
  for (Index c = 0; c < cols; ++c) {
    double sum = 0.0;
    bool bad_entry = false;
    for (Index r = 0; r < rows; ++r) {
      const double v = m(r, c);
      if (!std::isfinite(v) || v < 0.0) {
        out.push_back(name + " column " + std::to_string(c) + ": entry " + std::to_string(r) +
                      " is not a probability (" + fmt_num(v) + ")");
        bad_entry = true;
      }
      sum += v;
    }
    if (!bad_entry && std::abs(sum - 1.0) > kNormTolerance) {
      out.push_back(name + " column " + std::to_string(c) + ": sums to " + fmt_num(sum) + " (expected 1)");
    }
  }
}

void check_distribution(const std::vector<double>& p, std::size_t n, const std::string& name,
                        std::vector<std::string>& out) {
  if (p.size() != n) {
    out.push_back(name + ": length " + std::to_string(p.size()) + ", expected " + std::to_string(n));
    return;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!std::isfinite(p[i]) || p[i] < 0.0) {
      out.push_back(name + ": entry " + std::to_string(i) + " is not a probability (" + fmt_num(p[i]) + ")");
      return;
    }
    sum += p[i];
  }
  if (std::abs(sum - 1.0) > kNormTolerance) {
    out.push_back(name + ": sums to " + fmt_num(sum) + " (expected 1)");
  }
}

}  // namespace

std::vector<std::string> validate(const GenerativeModel& model) {
  std::vector<std::string> out;
  if (model.num_states == 0) out.emplace_back("num_states: must be positive");
  if (model.num_outcomes == 0) out.emplace_back("num_outcomes: must be positive");
  if (model.num_actions == 0) out.emplace_back("num_actions: must be positive");
  if (model.horizon == 0) out.emplace_back("horizon: must be positive");
  if (!out.empty()) return out;

  check_stochastic(model.likelihood, model.num_outcomes, model.num_states, "A", out);
  if (model.transitions.size() != model.num_actions) {
    out.push_back("B: " + std::to_string(model.transitions.size()) + " matrices, expected " +
                  std::to_string(model.num_actions));
  }
  for (std::size_t u = 0; u < model.transitions.size(); ++u) {
    check_stochastic(model.transitions[u], model.num_states, model.num_states, "B[" + std::to_string(u) + "]", out);
  }
  if (model.preferences.size() != model.num_outcomes) {
    out.push_back("C: length " + std::to_string(model.preferences.size()) + ", expected " +
                  std::to_string(model.num_outcomes));
  } else {
    for (std::size_t o = 0; o < model.preferences.size(); ++o) {
      if (!std::isfinite(model.preferences[o])) out.push_back("C: entry " + std::to_string(o) + " is not finite");
    }
  }
  check_distribution(model.state_prior, model.num_states, "D", out);

  if (model.state_preferences) {
    const auto& e = *model.state_preferences;
    if (e.size() != model.num_states) {
      out.push_back("state_preferences: length " + std::to_string(e.size()) + ", expected " +
                    std::to_string(model.num_states));
    } else {
      double sum = 0.0;
      for (std::size_t s = 0; s < e.size(); ++s) {
        if (!std::isfinite(e[s]) || e[s] < 0.0) {
          out.push_back("state_preferences: entry " + std::to_string(s) + " is negative or non-finite");
        }
        sum += e[s];
      }
      if (!(sum > 0.0)) out.emplace_back("state_preferences: all weights are zero");
    }
  }

  for (std::size_t k = 0; k < model.policies.size(); ++k) {
    const auto& actions = model.policies[k].actions;
    if (actions.size() + 1 != model.horizon) {
      out.push_back("policy " + std::to_string(k) + ": length " + std::to_string(actions.size()) + ", expected " +
                    std::to_string(model.horizon - 1));
    }
    for (std::size_t i = 0; i < actions.size(); ++i) {
      if (actions[i] >= model.num_actions) {
        out.push_back("policy " + std::to_string(k) + ": action " + std::to_string(i) + " has index " +
                      std::to_string(actions[i]) + " >= num_actions");
      }
    }
  }

  auto check_labels = [&](const std::vector<std::string>& labels, std::size_t n, const char* name) {
    if (!labels.empty() && labels.size() != n) {
      out.push_back(std::string(name) + ": " + std::to_string(labels.size()) + " labels, expected " +
                    std::to_string(n));
    }
  };
  check_labels(model.state_labels, model.num_states, "state_labels");
  check_labels(model.outcome_labels, model.num_outcomes, "outcome_labels");
  check_labels(model.action_labels, model.num_actions, "action_labels");
  return out;
}

void require_valid(const GenerativeModel& model) {
  const auto violations = validate(model);
  if (violations.empty()) return;
  std::string msg = "invalid model:";
  for (const auto& v : violations) msg += "\n  " + v;
  throw ModelError(msg);
}

// ---------------------------------------------------------------------------
// Spec text format

namespace {

const json& require_key(const json& doc, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end()) throw SchemaError(std::string("missing required field '") + key + "'");
  return *it;
}

std::size_t read_count(const json& doc, const char* key) {
  const json& v = require_key(doc, key);
  if (!v.is_number_integer() || v.get<long long>() <= 0) {
    throw SchemaError(std::string("field '") + key + "': expected a positive integer");
  }
  return v.get<std::size_t>();
}

double read_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw SchemaError(where + ": expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw SchemaError(where + ": not finite");
  return d;
}

double read_probability(const json& v, const std::string& where) {
  const double d = read_number(v, where);
  if (d < 0.0) throw SchemaError(where + ": negative probability (" + fmt_num(d) + ")");
  return d;
}

std::vector<double> read_vector(const json& v, std::size_t n, const std::string& name, bool probabilities) {
  if (!v.is_array()) throw SchemaError("field '" + name + "': expected an array");
  if (v.size() != n) {
    throw SchemaError("field '" + name + "': expected " + std::to_string(n) + " entries, got " +
                      std::to_string(v.size()));
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string where = name + "[" + std::to_string(i) + "]";
    out[i] = probabilities ? read_probability(v[i], where) : read_number(v[i], where);
  }
  return out;
}

Matrix read_matrix(const json& v, std::size_t rows, std::size_t cols, const std::string& name) {
  if (!v.is_array() || v.size() != rows) {
    throw SchemaError("field '" + name + "': expected " + std::to_string(rows) + " rows");
  }
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string row_name = name + "[" + std::to_string(r) + "]";
    const json& row = v[r];
    if (!row.is_array() || row.size() != cols) {
      throw SchemaError("field '" + row_name + "': expected " + std::to_string(cols) + " columns");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m(r, c) = read_probability(row[c], row_name + "[" + std::to_string(c) + "]");
    }
  }
  return m;
}

std::vector<std::string> read_labels(const json& doc, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end()) return {};
  if (!it->is_array()) throw SchemaError(std::string("field '") + key + "': expected an array of strings");
  std::vector<std::string> out;
  for (const auto& v : *it) {
    if (!v.is_string()) throw SchemaError(std::string("field '") + key + "': expected an array of strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows; ++r) {
    const auto row = m.row(r);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return rows;
}

}  // namespace

GenerativeModel parse_spec(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("malformed model spec: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("model spec must be an object");

  GenerativeModel m;
  m.num_states = read_count(doc, "num_states");
  m.num_outcomes = read_count(doc, "num_outcomes");
  m.num_actions = read_count(doc, "num_actions");
  m.horizon = read_count(doc, "horizon");

  m.likelihood = read_matrix(require_key(doc, "A"), m.num_outcomes, m.num_states, "A");

  const json& b = require_key(doc, "B");
  if (!b.is_array() || b.size() != m.num_actions) {
    throw SchemaError("field 'B': expected " + std::to_string(m.num_actions) + " matrices");
  }
  for (std::size_t u = 0; u < m.num_actions; ++u) {
    m.transitions.push_back(read_matrix(b[u], m.num_states, m.num_states, "B[" + std::to_string(u) + "]"));
  }

  m.preferences = read_vector(require_key(doc, "C"), m.num_outcomes, "C", false);
  m.state_prior = read_vector(require_key(doc, "D"), m.num_states, "D", true);

  const json& pol = require_key(doc, "policies");
  if (!pol.is_array()) throw SchemaError("field 'policies': expected a list of integer lists");
  std::vector<Policy> policies;
  for (std::size_t k = 0; k < pol.size(); ++k) {
    const json& p = pol[k];
    const std::string where = "policies[" + std::to_string(k) + "]";
    if (!p.is_array()) throw SchemaError("field '" + where + "': expected an integer list");
    Policy policy;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (!p[i].is_number_integer() || p[i].get<long long>() < 0) {
        throw SchemaError("field '" + where + "[" + std::to_string(i) + "]': expected a nonnegative integer");
      }
      policy.actions.push_back(p[i].get<Index>());
    }
    policies.push_back(std::move(policy));
  }
  try {
    m.policies = PolicySet(std::move(policies));
  } catch (const InvalidInputError& e) {
    throw SchemaError(std::string("field 'policies': ") + e.what());
  }

  if (const auto it = doc.find("state_preferences"); it != doc.end()) {
    m.state_preferences = read_vector(*it, m.num_states, "state_preferences", true);
  }
  m.state_labels = read_labels(doc, "state_labels");
  m.outcome_labels = read_labels(doc, "outcome_labels");
  m.action_labels = read_labels(doc, "action_labels");

  require_valid(m);
  return m;
}

std::string format_spec(const GenerativeModel& m) {
  json doc;
  doc["num_states"] = m.num_states;
  doc["num_outcomes"] = m.num_outcomes;
  doc["num_actions"] = m.num_actions;
  doc["horizon"] = m.horizon;
  doc["A"] = matrix_to_json(m.likelihood);
  json b = json::array();
  for (const auto& bu : m.transitions) b.push_back(matrix_to_json(bu));
  doc["B"] = std::move(b);
  doc["C"] = m.preferences;
  doc["D"] = m.state_prior;
  json pol = json::array();
  for (const auto& p : m.policies) pol.push_back(p.actions);
  doc["policies"] = std::move(pol);
  if (m.state_preferences) doc["state_preferences"] = *m.state_preferences;
  if (!m.state_labels.empty()) doc["state_labels"] = m.state_labels;
  if (!m.outcome_labels.empty()) doc["outcome_labels"] = m.outcome_labels;
  if (!m.action_labels.empty()) doc["action_labels"] = m.action_labels;
  // Doubles are printed in shortest round-trip form, so load(save(m)) is exact.
  return doc.dump(2) + "\n";
}

GenerativeModel load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open model spec '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("failed reading model spec '" + path.string() + "'");
  return parse_spec(buf.str());
}

void save_spec(const GenerativeModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << format_spec(model);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace aif
