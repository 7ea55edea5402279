#include <gtest/gtest.h>

#include <random>

#include "arat/error.hpp"
#include "arat/oracle.hpp"
#include "fixtures.hpp"

namespace arat {
namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double x : v) out(k++) = x;
  return out;
}

AratGame single_state(double r, double beta) {
  AratGame g;
  g.beta = beta;
  g.r1 = {Vector::Constant(1, r)};
  g.r2 = {Vector::Zero(1)};
  g.p1 = {Matrix::Constant(1, 1, 1.0)};
  g.p2 = {Matrix::Zero(1, 1)};
  return g;
}

TEST(Oracle, Example1ValueAndStrategies) {
  const GameSolution s = value_iteration(testing::example1());
  EXPECT_NEAR(s.v(0), 14.0, 1e-10);
  EXPECT_NEAR(s.v(1), 14.0, 1e-10);
  EXPECT_EQ(s.strategy_one, (std::vector<std::size_t>{0, 0}));
  EXPECT_EQ(s.strategy_two, (std::vector<std::size_t>{0, 1}));
  EXPECT_LE(s.residual, 1e-12);
}

TEST(Oracle, PurePairEvaluation) {
  const AratGame g = testing::example1();
  const Vector v = evaluate_pure_pair(g, {0, 0}, {0, 1});
  EXPECT_NEAR(v(0), 14.0, 1e-12);
  EXPECT_NEAR(v(1), 14.0, 1e-12);
  const GameSolution s = value_iteration(g);
  EXPECT_LE((v - s.v).lpNorm<Eigen::Infinity>(), 1e-10);
}

TEST(Oracle, SmallBetaGivesMatrixGameValue) {
  AratGame g = testing::example1();
  g.beta = 1e-9;
  const GameSolution s = value_iteration(g);
  EXPECT_NEAR(s.v(0), 7.0, 1e-7);
  EXPECT_NEAR(s.v(1), 7.0, 1e-7);
}

TEST(Oracle, ConstantRewards) {
  std::mt19937_64 rng(1);
  AratGame g = testing::random_game(rng, 3, 2, 0.75);
  for (auto& r : g.r1) r.setConstant(1.5);
  for (auto& r : g.r2) r.setConstant(0.5);
  const GameSolution s = value_iteration(g);
  EXPECT_LE((s.v.array() - 2.0 / 0.25).abs().maxCoeff(), 1e-10);
}

TEST(Oracle, AbsorbingState) {
  const AratGame g = single_state(1.0, 0.5);
  EXPECT_NEAR(evaluate_pure_pair(g, {0}, {0})(0), 2.0, 1e-15);
  EXPECT_NEAR(value_iteration(g).v(0), 2.0, 1e-12);
}

TEST(Oracle, PairAtTinyDiscountIsReward) {
  AratGame g = testing::example1();
  g.beta = 0.0;
  const Vector v = evaluate_pure_pair(g, {1, 0}, {1, 1});
  EXPECT_EQ(v, vec({9, 7}));
  EXPECT_THROW(evaluate_pure_pair(g, {0}, {0, 0}), Error);
}

TEST(Oracle, ToleranceAndIterationLimits) {
  const AratGame g = testing::example1();
  EXPECT_THROW(value_iteration(g, 0.0), Error);
  try {
    value_iteration(g, 1e-12, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMaxIterExceeded);
  }
}

TEST(Oracle, ShiftCovariance) {
  std::mt19937_64 rng(9);
  for (int k = 0; k < 20; ++k) {
    const double beta = k % 2 ? 0.3 : 0.9;
    const AratGame g = testing::random_game(rng, 3, 3, beta);
    const AratGame h = shift_rewards(g, 2.0, -0.5);
    const GameSolution a = value_iteration(g);
    const GameSolution b = value_iteration(h);
    const double c = 1.5 / (1.0 - beta);
    EXPECT_LE((b.v.array() - a.v.array() - c).abs().maxCoeff(), 1e-9);
    EXPECT_EQ(a.strategy_one, b.strategy_one);
    EXPECT_EQ(a.strategy_two, b.strategy_two);
  }
}

TEST(Oracle, EnumerationExample1) {
  const SquareLcp lcp = to_equivalent_lcp(build_vlcp(testing::example1()));
  const auto sols = enumerate_lcp(lcp.m, lcp.q);
  const Vector want = vec({6.5, 0, 5.5, 0, 7.5, 0, 0, 8.5});
  bool found = false;
  for (const auto& p : sols) {
    found = found || (p.z - want).lpNorm<Eigen::Infinity>() < 1e-9;
  }
  EXPECT_TRUE(found);
}

TEST(Oracle, EnumerationTrivialCases) {
  auto sols = enumerate_lcp(Matrix::Identity(3, 3), -Vector::Ones(3));
  ASSERT_EQ(sols.size(), 1u);
  EXPECT_EQ(sols[0].z, Vector::Ones(3));
  EXPECT_TRUE(sols[0].w.isZero(0.0));

  const Vector q = vec({1, 0, 2});
  sols = enumerate_lcp(Matrix::Random(3, 3), q);
  bool trivial = false;
  for (const auto& p : sols) trivial = trivial || (p.z.isZero(0.0) && p.w == q);
  EXPECT_TRUE(trivial);

  EXPECT_THROW(enumerate_lcp(Matrix::Identity(21, 21), Vector::Ones(21)), Error);
  EXPECT_THROW(enumerate_lcp(Matrix::Identity(2, 2), Vector::Ones(3)), Error);
}

TEST(Oracle, EnumeratedPointsAreSolutions) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> nd;
  for (int k = 0; k < 30; ++k) {
    const Eigen::Index n = 1 + k % 6;
    Matrix m(n, n);
    Vector q(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      q(i) = nd(rng);
      for (Eigen::Index j = 0; j < n; ++j) m(i, j) = nd(rng);
    }
    const auto sols = enumerate_lcp(m, q);
    for (std::size_t a = 0; a < sols.size(); ++a) {
      const auto& p = sols[a];
      EXPECT_LE((m * p.z + q - p.w).lpNorm<Eigen::Infinity>(), 1e-10);
      EXPECT_GE(p.z.minCoeff(), -1e-10);
      EXPECT_GE(p.w.minCoeff(), -1e-10);
      EXPECT_LE(std::abs(p.z.dot(p.w)), 1e-10);
      if (a > 0) {
        // sorted and distinct
        const Vector& prev = sols[a - 1].z;
        Eigen::Index i = 0;
        while (i < n && prev(i) == p.z(i)) ++i;
        ASSERT_LT(i, n);
        EXPECT_LT(prev(i), p.z(i));
      }
    }
  }
}

TEST(Oracle, CertifyCatchesPerturbations) {
  const AratGame g = testing::example1();
  VlcpSolution cand;
  cand.value = vec({14, 14});
  cand.strategy_one = {0, 0};
  cand.strategy_two = {0, 1};
  EXPECT_TRUE(certify(g, cand, 1e-4).passed());

  VlcpSolution off = cand;
  off.value(1) += 1.0;
  const CertificateReport r1 = certify(g, off, 1e-4);
  EXPECT_FALSE(r1.value_ok);
  EXPECT_TRUE(r1.player_one_ok && r1.player_two_ok);

  VlcpSolution wrong = cand;
  wrong.strategy_one = {1, 0};  // Q(2, j) = 13 < 14 at state 1
  wrong.strategy_two = {1, 1};
  const CertificateReport r2 = certify(g, wrong, 1e-4);
  EXPECT_TRUE(r2.value_ok);
  EXPECT_FALSE(r2.player_one_ok);
  EXPECT_FALSE(r2.player_two_ok);
  bool named = false;
  for (const auto& v : r2.violations) {
    named = named || v.find("state 1: player I action 1") != std::string::npos;
  }
  EXPECT_TRUE(named);
}

TEST(Oracle, EveryAratEnumerationHasACertifiedPoint) {
  std::mt19937_64 rng(33);
  for (int k = 0; k < 15; ++k) {
    const AratGame g = testing::random_game(rng, 2, 2, 0.5);
    const SquareLcp lcp = to_equivalent_lcp(build_vlcp(g));
    bool any = false;
    for (const auto& p : enumerate_lcp(lcp.m, lcp.q)) {
      const VlcpSolution s = recover_vlcp_solution(lcp, p.z, p.w);
      any = any || certify(g, s, 1e-6).passed();
    }
    EXPECT_TRUE(any) << k;
  }
}

}  // namespace
}  // namespace arat
