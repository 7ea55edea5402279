#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace arat {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Probability tolerance used by validate().
inline constexpr double kProbabilityTolerance = 1e-12;

/// Two-person zero-sum discounted stochastic game with additive rewards and
/// additive transitions. Indices are 0-based.
///
/// For state s, player I action i and player II action j the composed reward is
/// r1[s](i) + r2[s](j) and the composed transition row is
/// p1[s].row(i) + p2[s].row(j). p1[s] is m1(s) x d and p2[s] is m2(s) x d.
struct AratGame {
  double beta = 0.5;
  std::vector<Vector> r1;
  std::vector<Vector> r2;
  std::vector<Matrix> p1;
  std::vector<Matrix> p2;

  std::size_t num_states() const { return r1.size(); }
  std::size_t actions_one(std::size_t s) const { return r1.at(s).size(); }
  std::size_t actions_two(std::size_t s) const { return r2.at(s).size(); }

  bool operator==(const AratGame& other) const;
};

struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

/// Lists every violated invariant; never throws. Shape problems are reported
/// and short-circuit the numeric checks for the affected state.
ValidationReport validate(const AratGame& game);

/// r(s, i, j) = r1(s, i) + r2(s, j). Throws Error(kIndexOutOfRange).
double composed_reward(const AratGame& game, std::size_t s, std::size_t i,
                       std::size_t j);

/// Full m1(s) x m2(s) reward matrix of state s.
Matrix reward_matrix(const AratGame& game, std::size_t s);

/// p_ij(s, .) = p1(s, i, .) + p2(s, j, .). Throws Error(kIndexOutOfRange).
Vector composed_transition(const AratGame& game, std::size_t s, std::size_t i,
                           std::size_t j);

/// Adds c1 to every r1 entry and c2 to every r2 entry.
AratGame shift_rewards(const AratGame& game, double c1, double c2);

}  // namespace arat
