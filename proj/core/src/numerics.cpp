#include "aif/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "aif/errors.hpp"

namespace aif {

Categorical::Categorical(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw InvalidInputError("Categorical: empty support");
  double sum = 0.0;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    const double p = probs_[i];
    if (!std::isfinite(p) || p < 0.0) {
      throw InvalidInputError("Categorical: entry " + std::to_string(i) + " is not a probability (" +
                              std::to_string(p) + ")");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kNormTolerance) {
    throw InvalidInputError("Categorical: entries sum to " + std::to_string(sum));
  }
}

Categorical Categorical::uniform(std::size_t n) {
  if (n == 0) throw InvalidInputError("Categorical::uniform: empty support");
  return Categorical(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Categorical Categorical::delta(std::size_t n, Index k) {
  if (k >= n) throw InvalidInputError("Categorical::delta: index out of range");
  std::vector<double> p(n, 0.0);
  p[k] = 1.0;
  return Categorical(std::move(p));
}

std::vector<double> Matrix::column(Index c) const {
  std::vector<double> out(rows);
  for (Index r = 0; r < rows; ++r) out[r] = (*this)(r, c);
  return out;
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (Index i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

std::vector<double> matvec(const Matrix& m, std::span<const double> x) {
  if (x.size() != m.cols) {
    throw ShapeError("matvec: matrix has " + std::to_string(m.cols) + " columns, vector has " +
                     std::to_string(x.size()) + " entries");
  }
  std::vector<double> y(m.rows, 0.0);
  for (Index r = 0; r < m.rows; ++r) {
    const auto row = m.row(r);
    double acc = 0.0;
    for (Index c = 0; c < m.cols; ++c) acc += row[c] * x[c];
    y[r] = acc;
  }
  return y;
}

std::vector<double> matvec_transposed(const Matrix& m, std::span<const double> x) {
  if (x.size() != m.rows) {
    throw ShapeError("matvec_transposed: matrix has " + std::to_string(m.rows) + " rows, vector has " +
                     std::to_string(x.size()) + " entries");
  }
  std::vector<double> y(m.cols, 0.0);
  for (Index r = 0; r < m.rows; ++r) {
    const auto row = m.row(r);
    for (Index c = 0; c < m.cols; ++c) y[c] += row[c] * x[r];
  }
  return y;
}

double safe_log(double p) { return std::log(std::max(p, kLogFloor)); }

double logsumexp(std::span<const double> x) {
  if (x.empty()) throw InvalidInputError("logsumexp: empty input");
  const double m = *std::max_element(x.begin(), x.end());
  if (!std::isfinite(m)) return m;
  double acc = 0.0;
  for (double v : x) acc += std::exp(v - m);
  return m + std::log(acc);
}

Categorical normalize(std::span<const double> weights) {
  if (weights.empty()) throw DegenerateInputError("normalize: empty weight vector");
  double sum = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double w = weights[i];
    if (!std::isfinite(w) || w < 0.0) {
      throw DegenerateInputError("normalize: weight " + std::to_string(i) + " is negative or non-finite");
    }
    sum += w;
  }
  if (!(sum > 0.0)) throw DegenerateInputError("normalize: all weights are zero");
  std::vector<double> p(weights.begin(), weights.end());
  for (double& v : p) v /= sum;
  return Categorical(std::move(p));
}

Categorical softmax(std::span<const double> logits, double precision) {
  if (logits.empty()) throw InvalidInputError("softmax: empty logits");
  if (!std::isfinite(precision) || precision < 0.0) {
    throw InvalidInputError("softmax: precision must be finite and nonnegative");
  }
  for (double v : logits) {
    if (!std::isfinite(v)) throw InvalidInputError("softmax: non-finite logit");
  }
  const double m = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(precision * (logits[i] - m));
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return Categorical(std::move(p));
}

double entropy(std::span<const double> p) {
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log(v);
  }
  return h;
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw ShapeError("kl_divergence: lengths " + std::to_string(p.size()) + " and " + std::to_string(q.size()));
  }
  double kl = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) kl += p[i] * (std::log(p[i]) - safe_log(q[i]));
  }
  // Clamping q can push Σq marginally above one.
  return std::max(kl, 0.0);
}

}  // namespace aif
