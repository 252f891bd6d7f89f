#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace aif {

using Index = std::size_t;

/// Floor applied to every probability before taking its logarithm.
inline constexpr double kLogFloor = 1e-16;

/// Tolerance on the sum-to-one invariant of a Categorical.
inline constexpr double kNormTolerance = 1e-9;

/// Normalized probability vector over a finite support.
///
/// Construction validates the invariants (nonempty, nonnegative, finite,
/// sums to one within kNormTolerance); every instance is therefore a valid
/// distribution. Values are stored as given, not renormalized.
class Categorical {
 public:
  explicit Categorical(std::vector<double> probs);

  /// Uniform distribution over n outcomes.
  static Categorical uniform(std::size_t n);
  /// Point mass on index k of an n-element support.
  static Categorical delta(std::size_t n, Index k);

  std::size_t size() const { return probs_.size(); }
  double operator[](Index i) const { return probs_[i]; }
  std::span<const double> probs() const { return probs_; }
  const std::vector<double>& vec() const { return probs_; }
  auto begin() const { return probs_.begin(); }
  auto end() const { return probs_.end(); }

  operator std::span<const double>() const { return probs_; }  // NOLINT

  bool operator==(const Categorical&) const = default;

 private:
  std::vector<double> probs_;
};

/// Dense row-major matrix. Column-stochastic matrices (likelihood,
/// transitions) index as (row = to/outcome, col = from/state).
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(Index r, Index c) { return data[r * cols + c]; }
  double operator()(Index r, Index c) const { return data[r * cols + c]; }

  std::span<const double> row(Index r) const { return {data.data() + r * cols, cols}; }
  std::vector<double> column(Index c) const;

  static Matrix identity(std::size_t n);

  bool operator==(const Matrix&) const = default;
};

/// y = M x. Throws ShapeError when x.size() != M.cols.
std::vector<double> matvec(const Matrix& m, std::span<const double> x);
/// y = Mᵀ x. Throws ShapeError when x.size() != M.rows.
std::vector<double> matvec_transposed(const Matrix& m, std::span<const double> x);

/// ln(max(p, kLogFloor)).
double safe_log(double p);

/// Numerically stable ln Σ exp(x_i). Throws InvalidInputError on empty input.
double logsumexp(std::span<const double> x);

/// Scale nonnegative weights to sum to one.
/// Throws DegenerateInputError on negative, non-finite or all-zero input.
Categorical normalize(std::span<const double> weights);

/// probs[i] ∝ exp(precision · logits[i]), with max-subtraction.
/// Throws InvalidInputError on non-finite logits or negative precision.
Categorical softmax(std::span<const double> logits, double precision = 1.0);

/// Shannon entropy in nats, 0·ln 0 := 0.
double entropy(std::span<const double> p);

/// Σ p (ln p − ln q), q clamped at kLogFloor. Throws ShapeError on length mismatch.
double kl_divergence(std::span<const double> p, std::span<const double> q);

}  // namespace aif
