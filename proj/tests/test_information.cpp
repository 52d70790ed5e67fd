#include <gtest/gtest.h>

#include <cmath>

#include "chshq/errors.hpp"
#include "chshq/information.hpp"
#include "chshq/random.hpp"
#include "oracles.hpp"

namespace {

using chshq::ClassicalProtocol;
using chshq::JointDist;
using Eigen::MatrixXd;

MatrixXd random_stochastic(Eigen::Index rows, Eigen::Index cols, chshq::Rng& rng, double sparsity = 0.0) {
  MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    do {
      for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = rng.bernoulli(sparsity) ? 0.0 : rng.uniform();
    } while (m.row(r).sum() <= 0.0);
    m.row(r) /= m.row(r).sum();
  }
  return m;
}

// Uniform X with a random channel to Y.
JointDist uniform_x_joint(Eigen::Index a, Eigen::Index b, chshq::Rng& rng) {
  const double sparsity = rng.uniform() * 0.7;
  return JointDist(random_stochastic(a, b, rng, sparsity) / static_cast<double>(a));
}

JointDist random_joint(Eigen::Index a, Eigen::Index b, chshq::Rng& rng) {
  MatrixXd m(a, b);
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = rng.uniform();
  return JointDist(m / m.sum());
}

ClassicalProtocol copy_protocol(Eigen::Index n) {
  return ClassicalProtocol{MatrixXd::Identity(n, n), MatrixXd::Identity(n, n)};
}

}  // namespace

TEST(JointDistribution, Validation) {
  MatrixXd bad(2, 2);
  bad << 0.5, 0.5, 0.5, 0.5;
  EXPECT_THROW(JointDist{bad}, chshq::InvalidInput);
  bad << 0.75, -0.25, 0.25, 0.25;
  EXPECT_THROW(JointDist{bad}, chshq::InvalidInput);
  MatrixXd ok(2, 2);
  ok << 0.1, 0.2, 0.3, 0.4;
  const JointDist d(ok);
  EXPECT_NEAR(d.x_marginal()(1), 0.7, 1e-15);
  EXPECT_NEAR(d.y_marginal()(1), 0.6, 1e-15);
}

TEST(Entropy, Basics) {
  EXPECT_DOUBLE_EQ(chshq::entropy(Eigen::Vector2d(0.5, 0.5)), 1.0);
  EXPECT_DOUBLE_EQ(chshq::entropy(Eigen::Vector3d(1.0, 0.0, 0.0)), 0.0);
  EXPECT_NEAR(chshq::entropy(Eigen::Vector2d(0.25, 0.75)), oracle::binary_entropy(0.25), 1e-15);
  EXPECT_NEAR(chshq::entropy(Eigen::VectorXd::Constant(8, 0.125)), 3.0, 1e-15);
}

TEST(MutualInformation, Examples) {
  EXPECT_NEAR(chshq::mutual_information(JointDist(MatrixXd::Constant(2, 2, 0.25))), 0.0, 1e-15);
  for (const int q : {2, 3, 5, 8}) {
    EXPECT_NEAR(chshq::mutual_information(JointDist(MatrixXd::Identity(q, q) / q)), std::log2(q), 1e-12);
  }
  MatrixXd bsc(2, 2);
  bsc << 0.375, 0.125, 0.125, 0.375;
  const double mi = chshq::mutual_information(JointDist(bsc));
  EXPECT_NEAR(mi, 1.0 - oracle::binary_entropy(0.25), 1e-12);
  EXPECT_NEAR(mi, 0.18872, 1e-5);
}

TEST(MutualInformation, MatchesDirectSumAndBounds) {
  chshq::Rng rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = static_cast<Eigen::Index>(1 + rng.below(6));
    const auto b = static_cast<Eigen::Index>(1 + rng.below(6));
    const JointDist d = random_joint(a, b, rng);
    const double mi = chshq::mutual_information(d);
    EXPECT_NEAR(mi, oracle::mutual_information(d.table()), 1e-12);
    EXPECT_GE(mi, 0.0);
    EXPECT_LE(mi, std::min(chshq::entropy(d.x_marginal()), chshq::entropy(d.y_marginal())) + 1e-12);
    EXPECT_NEAR(chshq::joint_entropy(d),
                chshq::entropy(d.x_marginal()) + chshq::entropy(d.y_marginal()) - mi, 1e-12);
  }
}

TEST(MutualInformation, DataProcessing) {
  chshq::Rng rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = static_cast<Eigen::Index>(2 + rng.below(5));
    const auto b = static_cast<Eigen::Index>(2 + rng.below(5));
    const JointDist d = random_joint(a, b, rng);
    const int out = static_cast<int>(1 + rng.below(static_cast<std::uint64_t>(b)));
    std::vector<int> f(static_cast<std::size_t>(b));
    for (auto& v : f) v = static_cast<int>(rng.below(static_cast<std::uint64_t>(out)));
    const JointDist r = chshq::relabel_y(d, f, out);
    EXPECT_EQ(r.y_size(), out);
    for (Eigen::Index x = 0; x < a; ++x) {
      for (int z = 0; z < out; ++z) {
        double expected = 0.0;
        for (Eigen::Index y = 0; y < b; ++y)
          if (f[static_cast<std::size_t>(y)] == z) expected += d.table()(x, y);
        EXPECT_NEAR(r.table()(x, z), expected, 1e-15);
      }
    }
    EXPECT_LE(chshq::mutual_information(r), chshq::mutual_information(d) + 1e-12);
  }
  const JointDist d(MatrixXd::Identity(3, 3) / 3.0);
  EXPECT_THROW(chshq::relabel_y(d, std::vector<int>{0, 1}, 2), chshq::InvalidInput);
  EXPECT_THROW(chshq::relabel_y(d, std::vector<int>{0, 1, 2}, 2), chshq::InvalidInput);
}

TEST(BinaryReduction, Examples) {
  for (const int q : {2, 3, 5}) {
    const JointDist copy(MatrixXd::Identity(q, q) / q);
    const auto r = chshq::binary_reduction_select(copy);
    EXPECT_GE(r.achieved_mi, std::log2(q) / q - 1e-12);
    EXPECT_EQ(static_cast<int>(r.indicator.size()), q);
  }
  const auto indep = chshq::binary_reduction_select(JointDist(MatrixXd::Constant(3, 4, 1.0 / 12)));
  EXPECT_NEAR(indep.achieved_mi, 0.0, 1e-12);
  MatrixXd skew(2, 2);
  skew << 0.6, 0.1, 0.2, 0.1;
  EXPECT_THROW(chshq::binary_reduction_select(JointDist(skew)), chshq::InvalidInput);
}

TEST(BinaryReduction, GuaranteeOnRandomJoints) {
  chshq::Rng rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const auto a = static_cast<Eigen::Index>(2 + rng.below(5));
    const auto b = static_cast<Eigen::Index>(2 + rng.below(5));
    const JointDist d = uniform_x_joint(a, b, rng);
    const auto r = chshq::binary_reduction_select(d);
    const double original = chshq::mutual_information(d);
    ASSERT_NEAR(r.original_mi, original, 1e-12);
    ASSERT_GE(r.achieved_mi, original / static_cast<double>(b) - 1e-10) << "trial " << trial;
    const JointDist reduced = chshq::relabel_y(d, r.indicator, 2);
    ASSERT_NEAR(r.achieved_mi, chshq::mutual_information(reduced), 1e-12);
    int ones = 0;
    for (Eigen::Index y = 0; y < b; ++y) {
      ones += r.indicator[static_cast<std::size_t>(y)];
      ASSERT_EQ(r.indicator[static_cast<std::size_t>(y)], y == r.selected ? 1 : 0);
    }
    ASSERT_EQ(ones, 1);
    // The selected index maximises r_j (1 - t_j); the weighted sum equals the ratio s.
    const Eigen::ArrayXd score = r.r.array() * (1.0 - r.t.array());
    ASSERT_NEAR(score(r.selected), score.maxCoeff(), 1e-15);
    ASSERT_NEAR(score.sum(), r.information_ratio, 1e-12);
  }
}

TEST(Protocols, OriginalJointAndValidation) {
  chshq::Rng rng(6);
  const ClassicalProtocol p{random_stochastic(3, 4, rng), random_stochastic(4, 2, rng)};
  EXPECT_NO_THROW(chshq::validate(p));
  const JointDist j = chshq::original_joint(p);
  const MatrixXd expected = p.message * p.decoder / 3.0;
  EXPECT_LT((j.table() - expected).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(chshq::validate(ClassicalProtocol{random_stochastic(3, 4, rng), random_stochastic(3, 2, rng)}),
               chshq::InvalidInput);
  MatrixXd not_stochastic = random_stochastic(2, 2, rng);
  not_stochastic(0, 0) += 0.5;
  EXPECT_THROW(chshq::validate(ClassicalProtocol{not_stochastic, MatrixXd::Identity(2, 2)}), chshq::InvalidInput);
}

TEST(CStar, ExactModel) {
  chshq::Rng rng(7);
  for (const Eigen::Index sigma : {2, 3, 4, 6}) {
    const ClassicalProtocol p{random_stochastic(3, sigma, rng), random_stochastic(sigma, 3, rng)};
    const auto m = chshq::cstar_model(p);
    EXPECT_NEAR(m.p_match, 1.0 / static_cast<double>(sigma), 1e-15);
    EXPECT_LT((m.given_match.table() - chshq::original_joint(p).table()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_EQ(chshq::mutual_information(m.given_mismatch), 0.0);
  }
}

TEST(CStar, SimulationMatchRateAndConditionalInformation) {
  chshq::Rng rng(8);
  for (const Eigen::Index sigma : {2, 3, 4}) {
    const ClassicalProtocol p{random_stochastic(3, sigma, rng), random_stochastic(sigma, 3, rng)};
    const auto sim = chshq::simulate_cstar(p, 100000, 100 + static_cast<std::uint64_t>(sigma));
    EXPECT_EQ(sim.runs, 100000u);
    EXPECT_LE(std::abs(sim.match_rate - 1.0 / static_cast<double>(sigma)), 3 * sim.match_rate_stderr);
    EXPECT_NEAR(sim.original_mi, chshq::mutual_information(chshq::original_joint(p)), 1e-15);
    EXPECT_LE(std::abs(sim.conditional_mi - sim.conditional_mi_bias - sim.original_mi),
              3 * sim.conditional_mi_stderr);
    EXPECT_EQ(static_cast<std::uint64_t>(sim.match_counts.sum()), sim.matches);
  }
}

TEST(CStar, CopyChannelOverThreeSymbols) {
  const auto sim = chshq::simulate_cstar(copy_protocol(3), 100000, 21);
  EXPECT_LE(std::abs(sim.match_rate - 1.0 / 3.0), 3 * sim.match_rate_stderr);
  EXPECT_NEAR(sim.original_mi, std::log2(3.0), 1e-12);
  EXPECT_LE(std::abs(sim.conditional_mi - sim.conditional_mi_bias - std::log2(3.0)),
            3 * sim.conditional_mi_stderr);
}

TEST(CStar, SeededDeterminism) {
  const auto a = chshq::simulate_cstar(copy_protocol(4), 5000, 9);
  const auto b = chshq::simulate_cstar(copy_protocol(4), 5000, 9);
  EXPECT_EQ(a.matches, b.matches);
  EXPECT_EQ(a.match_counts, b.match_counts);
}
