#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "arat/game.hpp"
#include "arat/vlcp.hpp"

namespace arat {

/// Value vector and a pure saddle-point pair from Shapley value iteration.
struct GameSolution {
  Vector v;
  std::vector<std::size_t> strategy_one;
  std::vector<std::size_t> strategy_two;
  std::size_t iterations = 0;
  double residual = 0.0;  // sup-norm Bellman residual at v
};

/// Iterates v <- val[Q_s(v)] with a pure-saddle val until the step is below
/// tol (1 - beta) / (2 beta). Throws kNoPureSaddle / kMaxIterExceeded.
GameSolution value_iteration(const AratGame& game, double tol = 1e-12,
                             std::size_t max_iter = 1'000'000);

/// Auxiliary matrix r(s,i,j) + beta sum_s' p_ij(s,s') v(s').
Matrix auxiliary_matrix(const AratGame& game, std::size_t s, const Vector& v);

/// Solves (I - beta P(k, l)) v = r(k, l) for a pure stationary pair.
Vector evaluate_pure_pair(const AratGame& game,
                          const std::vector<std::size_t>& strategy_one,
                          const std::vector<std::size_t>& strategy_two);

/// Every complementary-support solution of LCP(q, M): for each support the
/// induced system is solved densely, nonnegative solutions are kept.
/// Inconsistent singular supports are skipped. Output is deduplicated and
/// lexicographically sorted by z. Throws kSizeGuardExceeded.
std::vector<LcpPair> enumerate_lcp(const Matrix& m, const Vector& q,
                                   std::size_t guard = kEnumerationGuard);

struct CertificateReport {
  bool value_ok = false;
  bool player_one_ok = false;  // no player I deviation gains
  bool player_two_ok = false;  // no player II deviation gains
  double value_error = 0.0;
  Vector oracle_value;
  std::vector<std::string> violations;

  bool passed() const { return value_ok && player_one_ok && player_two_ok; }
};

/// Compares a candidate against value_iteration and checks both Shapley
/// inequalities for the candidate's strategies at the oracle value.
CertificateReport certify(const AratGame& game, const VlcpSolution& candidate,
                          double tol);

}  // namespace arat
