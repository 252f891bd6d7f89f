#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "aif/errors.hpp"
#include "aif/numerics.hpp"
#include "../support/oracle.hpp"

namespace aif {
namespace {

TEST(Normalize, SymmetricWeights) {
  const std::vector<double> w{2, 2};
  const auto p = normalize(w);
  EXPECT_DOUBLE_EQ(p[0], 0.5);
  EXPECT_DOUBLE_EQ(p[1], 0.5);
}

TEST(Normalize, DegenerateInputs) {
  EXPECT_THROW(normalize(std::vector<double>{0, 0}), DegenerateInputError);
  EXPECT_THROW(normalize(std::vector<double>{1, -1}), DegenerateInputError);
  EXPECT_THROW(normalize(std::vector<double>{}), DegenerateInputError);
  EXPECT_THROW(normalize(std::vector<double>{NAN, 1}), DegenerateInputError);
}

TEST(Normalize, PriorCounts) {
  const auto p = normalize(std::vector<double>{128, 128, 0, 0, 0, 0, 0, 0});
  const std::vector<double> expected{0.5, 0.5, 0, 0, 0, 0, 0, 0};
  EXPECT_EQ(p.vec(), expected);
}

TEST(Normalize, Idempotent) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> w(1 + i % 9);
    for (double& v : w) v = u(rng);
    const auto once = normalize(w);
    const auto twice = normalize(once.probs());
    for (std::size_t k = 0; k < w.size(); ++k) EXPECT_NEAR(once[k], twice[k], 1e-12);
  }
}

TEST(Softmax, Examples) {
  const auto a = softmax(std::vector<double>{0, 0}, 1.0);
  EXPECT_DOUBLE_EQ(a[0], 0.5);
  const auto b = softmax(std::vector<double>{5, -3, 7}, 0.0);
  for (double v : b) EXPECT_NEAR(v, 1.0 / 3.0, 1e-15);
  const auto c = softmax(std::vector<double>{std::log(2.0), 0}, 1.0);
  EXPECT_NEAR(c[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(c[1], 1.0 / 3.0, 1e-15);
}

TEST(Softmax, RejectsNonFinite) {
  EXPECT_THROW(softmax(std::vector<double>{NAN, 0}, 1.0), InvalidInputError);
  EXPECT_THROW(softmax(std::vector<double>{INFINITY, 0}, 1.0), InvalidInputError);
  EXPECT_THROW(softmax(std::vector<double>{0, 0}, -1.0), InvalidInputError);
}

TEST(Softmax, LargeLogitsStayFinite) {
  const auto p = softmax(std::vector<double>{1000, 999}, 1.0);
  EXPECT_NEAR(p[0], 1.0 / (1.0 + std::exp(-1.0)), 1e-12);
}

TEST(Softmax, ShiftInvariance) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 5.0);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> logits(2 + i % 7);
    for (double& v : logits) v = n(rng);
    const double c = n(rng) * 10;
    auto shifted = logits;
    for (double& v : shifted) v += c;
    const double gamma = std::abs(n(rng));
    const auto p = softmax(logits, gamma);
    const auto q = softmax(shifted, gamma);
    for (std::size_t k = 0; k < p.size(); ++k) EXPECT_NEAR(p[k], q[k], 1e-12);
  }
}

TEST(Entropy, Examples) {
  EXPECT_EQ(entropy(std::vector<double>{1, 0}), 0.0);
  EXPECT_NEAR(entropy(std::vector<double>{0.5, 0.5}), std::log(2.0), 1e-15);
  const double direct = -(0.98 * std::log(0.98) + 0.02 * std::log(0.02));
  EXPECT_NEAR(entropy(std::vector<double>{0.98, 0.02}), direct, 1e-15);
  EXPECT_NEAR(direct, 0.098039, 1e-6);
}

TEST(Entropy, BoundedByLogSupport) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    const std::size_t n = 1 + i % 10;
    const auto p = testing::random_distribution(n, rng, 0.0);
    EXPECT_LE(entropy(p), std::log(static_cast<double>(n)) + 1e-12);
  }
  for (std::size_t n = 1; n <= 10; ++n) {
    EXPECT_NEAR(entropy(Categorical::uniform(n)), std::log(static_cast<double>(n)), 1e-12);
  }
}

TEST(KlDivergence, Examples) {
  const std::vector<double> p{0.2, 0.3, 0.5};
  EXPECT_EQ(kl_divergence(p, p), 0.0);
  EXPECT_NEAR(kl_divergence(std::vector<double>{1, 0}, std::vector<double>{0.5, 0.5}), std::log(2.0), 1e-15);
  // q = 0 is clamped to 1e-16 before the log.
  EXPECT_NEAR(kl_divergence(std::vector<double>{1, 0}, std::vector<double>{0, 1}), -std::log(1e-16), 1e-12);
  EXPECT_NEAR(-std::log(1e-16), 36.8414, 1e-4);
}

TEST(KlDivergence, ShapeMismatch) {
  EXPECT_THROW(kl_divergence(std::vector<double>{1}, std::vector<double>{0.5, 0.5}), ShapeError);
}

TEST(KlDivergence, NonNegativeAndZeroOnlyAtEquality) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 2 + i % 7;
    const auto p = testing::random_distribution(n, rng, 0.0);
    const auto q = testing::random_distribution(n, rng, 0.0);
    const double kl = kl_divergence(p, q);
    EXPECT_GE(kl, 0.0);
    EXPECT_GT(kl, 0.0) << "distinct random distributions";
    EXPECT_NEAR(kl_divergence(p, p), 0.0, 1e-12);
  }
}

TEST(Categorical, Invariants) {
  EXPECT_THROW(Categorical(std::vector<double>{}), InvalidInputError);
  EXPECT_THROW(Categorical(std::vector<double>{0.5, 0.6}), InvalidInputError);
  EXPECT_THROW(Categorical(std::vector<double>{1.5, -0.5}), InvalidInputError);
  EXPECT_NO_THROW(Categorical(std::vector<double>{0.5, 0.5 + 1e-10}));
  EXPECT_EQ(Categorical::delta(3, 2).vec(), (std::vector<double>{0, 0, 1}));
}

TEST(Matrix, MatvecShapes) {
  const Matrix m = Matrix::identity(3);
  EXPECT_THROW(matvec(m, std::vector<double>{1, 2}), ShapeError);
  EXPECT_EQ(matvec(m, std::vector<double>{1, 2, 3}), (std::vector<double>{1, 2, 3}));
  Matrix r(2, 3);
  r(0, 1) = 2.0;
  EXPECT_EQ(matvec_transposed(r, std::vector<double>{1, 1}), (std::vector<double>{0, 2, 0}));
}

TEST(Logsumexp, MatchesDirectEvaluation) {
  const std::vector<double> c{0, 6, -6, 6, -6, 0, 0};
  EXPECT_NEAR(logsumexp(c), std::log(3 + 2 * std::exp(6.0) + 2 * std::exp(-6.0)), 1e-14);
}

}  // namespace
}  // namespace aif
