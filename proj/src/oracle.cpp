#include "arat/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "arat/error.hpp"

namespace arat {
namespace {

struct Saddle {
  double value = 0.0;
  std::size_t row = 0;
  std::size_t col = 0;
};

// Pure saddle point of a matrix game, smallest-index tie-break.
Saddle pure_saddle(const Matrix& q, std::size_t state) {
  const Vector row_min = q.rowwise().minCoeff();
  const Eigen::RowVectorXd col_max = q.colwise().maxCoeff();
  const double lower = row_min.maxCoeff();
  const double upper = col_max.minCoeff();
  const double scale = 1.0 + std::max(std::abs(lower), std::abs(upper));
  if (upper - lower > 1e-9 * scale) {
    throw Error(ErrorCode::kNoPureSaddle,
                "state " + std::to_string(state + 1) + ": maxmin " +
                    std::to_string(lower) + " < minmax " +
                    std::to_string(upper));
  }
  const double tie = 1e-12 * scale;
  Saddle out;
  out.value = lower;
  for (Eigen::Index i = 0; i < row_min.size(); ++i) {
    if (row_min(i) >= lower - tie) {
      out.row = static_cast<std::size_t>(i);
      break;
    }
  }
  for (Eigen::Index j = 0; j < col_max.size(); ++j) {
    if (col_max(j) <= upper + tie) {
      out.col = static_cast<std::size_t>(j);
      break;
    }
  }
  return out;
}

Vector shapley_operator(const AratGame& game, const Vector& v) {
  Vector out(v.size());
  for (std::size_t s = 0; s < game.num_states(); ++s) {
    out(static_cast<Eigen::Index>(s)) =
        pure_saddle(auxiliary_matrix(game, s, v), s).value;
  }
  return out;
}

bool lex_less(const Vector& a, const Vector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) < b(i)) return true;
    if (a(i) > b(i)) return false;
  }
  return false;
}

}  // namespace

Matrix auxiliary_matrix(const AratGame& game, std::size_t s, const Vector& v) {
  // Additive structure: Q = (r1 + beta P1 v) 1' + 1 (r2 + beta P2 v)'.
  const Vector a = game.r1.at(s) + game.beta * (game.p1[s] * v);
  const Vector b = game.r2.at(s) + game.beta * (game.p2[s] * v);
  return a.replicate(1, b.size()) + b.transpose().replicate(a.size(), 1);
}

GameSolution value_iteration(const AratGame& game, double tol,
                             std::size_t max_iter) {
  if (!(tol > 0.0)) {
    throw Error(ErrorCode::kPreconditionViolated, "tol must be positive");
  }
  const auto d = static_cast<Eigen::Index>(game.num_states());
  const double beta = game.beta;
  const double bound = beta > 0.0 ? tol * (1.0 - beta) / (2.0 * beta)
                                  : std::numeric_limits<double>::infinity();

  GameSolution sol;
  Vector v = Vector::Zero(d);
  bool done = false;
  for (std::size_t k = 1; k <= max_iter; ++k) {
    Vector next = shapley_operator(game, v);
    const double step = (next - v).lpNorm<Eigen::Infinity>();
    v = std::move(next);
    sol.iterations = k;
    // Never ask for more than a few ulps of the iterate.
    const double floor =
        8.0 * std::numeric_limits<double>::epsilon() *
        std::max(1.0, v.lpNorm<Eigen::Infinity>());
    if (step <= std::max(bound, floor)) {
      done = true;
      break;
    }
  }
  if (!done) {
    throw Error(ErrorCode::kMaxIterExceeded,
                std::to_string(max_iter) + " iterations");
  }

  sol.v = v;
  Vector image(d);
  for (std::size_t s = 0; s < game.num_states(); ++s) {
    const Saddle sp = pure_saddle(auxiliary_matrix(game, s, v), s);
    image(static_cast<Eigen::Index>(s)) = sp.value;
    sol.strategy_one.push_back(sp.row);
    sol.strategy_two.push_back(sp.col);
  }
  sol.residual = (image - v).lpNorm<Eigen::Infinity>();
  return sol;
}

Vector evaluate_pure_pair(const AratGame& game,
                          const std::vector<std::size_t>& strategy_one,
                          const std::vector<std::size_t>& strategy_two) {
  const std::size_t d = game.num_states();
  if (strategy_one.size() != d || strategy_two.size() != d) {
    throw Error(ErrorCode::kDimensionMismatch, "one action per state");
  }
  const auto di = static_cast<Eigen::Index>(d);
  Matrix p(di, di);
  Vector r(di);
  for (std::size_t s = 0; s < d; ++s) {
    const auto si = static_cast<Eigen::Index>(s);
    p.row(si) =
        composed_transition(game, s, strategy_one[s], strategy_two[s])
            .transpose();
    r(si) = composed_reward(game, s, strategy_one[s], strategy_two[s]);
  }
  const Matrix sys = Matrix::Identity(di, di) - game.beta * p;
  const Eigen::FullPivLU<Matrix> lu(sys);
  if (!lu.isInvertible()) {
    throw Error(ErrorCode::kSingularSystem, "I - beta P(k, l) is singular");
  }
  return lu.solve(r);
}

std::vector<LcpPair> enumerate_lcp(const Matrix& m, const Vector& q,
                                   std::size_t guard) {
  const auto n = static_cast<std::size_t>(q.size());
  if (m.rows() != q.size() || m.cols() != q.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "M must be n x n");
  }
  if (n > guard) {
    throw Error(ErrorCode::kSizeGuardExceeded,
                "n = " + std::to_string(n) + " exceeds " +
                    std::to_string(guard));
  }
  const double tol = 1e-10 * (1.0 + q.lpNorm<Eigen::Infinity>());
  const auto ni = static_cast<Eigen::Index>(n);

  std::vector<LcpPair> found;
  std::vector<Eigen::Index> in;
  in.reserve(n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    // Bits of mask mark w_p = 0 (z_p free); the rest have z_p = 0.
    in.clear();
    for (Eigen::Index p = 0; p < ni; ++p) {
      if ((mask >> p) & 1U) in.push_back(p);
    }
    const auto s = static_cast<Eigen::Index>(in.size());
    Vector z = Vector::Zero(ni);
    if (s > 0) {
      Matrix sub(s, s);
      Vector rhs(s);
      for (Eigen::Index r = 0; r < s; ++r) {
        rhs(r) = -q(in[r]);
        for (Eigen::Index c = 0; c < s; ++c) sub(r, c) = m(in[r], in[c]);
      }
      const Eigen::FullPivLU<Matrix> lu(sub);
      Vector za;
      if (lu.isInvertible()) {
        za = lu.solve(rhs);
      } else {
        // Singular support: keep the minimum-norm point when consistent.
        const Eigen::CompleteOrthogonalDecomposition<Matrix> cod(sub);
        za = cod.solve(rhs);
        if ((sub * za - rhs).lpNorm<Eigen::Infinity>() > tol) continue;
      }
      if (za.minCoeff() < -tol) continue;
      for (Eigen::Index r = 0; r < s; ++r) z(in[r]) = za(r);
    }
    Vector w = m * z + q;
    for (Eigen::Index r : in) w(r) = 0.0;
    if (n > 0 && w.minCoeff() < -tol) continue;
    found.push_back({std::move(z), std::move(w)});
  }

  std::sort(found.begin(), found.end(),
            [](const LcpPair& a, const LcpPair& b) { return lex_less(a.z, b.z); });
  std::vector<LcpPair> unique;
  for (auto& pair : found) {
    if (!unique.empty() &&
        (unique.back().z - pair.z).lpNorm<Eigen::Infinity>() <= 1e-9) {
      continue;
    }
    unique.push_back(std::move(pair));
  }
  return unique;
}

CertificateReport certify(const AratGame& game, const VlcpSolution& candidate,
                          double tol) {
  CertificateReport report;
  const GameSolution oracle = value_iteration(game);
  report.oracle_value = oracle.v;
  const std::size_t d = game.num_states();

  if (candidate.value.size() == oracle.v.size()) {
    report.value_error =
        (candidate.value - oracle.v).lpNorm<Eigen::Infinity>();
    report.value_ok = report.value_error <= tol;
    if (!report.value_ok) {
      report.violations.push_back("value differs from the oracle by " +
                                  std::to_string(report.value_error));
    }
  } else {
    report.value_error = std::numeric_limits<double>::infinity();
    report.violations.push_back("candidate value has the wrong length");
  }

  if (candidate.strategy_one.size() != d || candidate.strategy_two.size() != d) {
    report.violations.push_back("candidate strategies have the wrong length");
    return report;
  }

  report.player_one_ok = true;
  report.player_two_ok = true;
  for (std::size_t s = 0; s < d; ++s) {
    const auto si = static_cast<Eigen::Index>(s);
    const std::size_t i0 = candidate.strategy_one[s];
    const std::size_t j0 = candidate.strategy_two[s];
    if (i0 >= game.actions_one(s) || j0 >= game.actions_two(s)) {
      report.player_one_ok = report.player_two_ok = false;
      report.violations.push_back("state " + std::to_string(s + 1) +
                                  ": strategy index out of range");
      continue;
    }
    const Matrix q = auxiliary_matrix(game, s, oracle.v);
    const double vs = oracle.v(si);
    for (Eigen::Index i = 0; i < q.rows(); ++i) {
      if (q(i, static_cast<Eigen::Index>(j0)) > vs + tol) {
        report.player_one_ok = false;
        report.violations.push_back(
            "state " + std::to_string(s + 1) + ": player I action " +
            std::to_string(i + 1) + " beats the value against j = " +
            std::to_string(j0 + 1));
      }
    }
    for (Eigen::Index j = 0; j < q.cols(); ++j) {
      if (q(static_cast<Eigen::Index>(i0), j) < vs - tol) {
        report.player_two_ok = false;
        report.violations.push_back(
            "state " + std::to_string(s + 1) + ": player II action " +
            std::to_string(j + 1) + " undercuts the value against i = " +
            std::to_string(i0 + 1));
      }
    }
  }
  return report;
}

}  // namespace arat
