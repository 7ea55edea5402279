#include "arat/vlcp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "arat/error.hpp"
#include "arat/oracle.hpp"

namespace arat {

SquareLcp SquareLcp::plain(Matrix m, Vector q) {
  if (m.rows() != m.cols() || m.rows() != q.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "LCP matrix must be n x n");
  }
  SquareLcp lcp;
  lcp.blocks.reserve(static_cast<std::size_t>(q.size()));
  for (Eigen::Index p = 0; p < q.size(); ++p) {
    lcp.blocks.push_back({static_cast<std::size_t>(p), 1});
  }
  lcp.m = std::move(m);
  lcp.q = std::move(q);
  return lcp;
}

VlcpInstance build_vlcp(const AratGame& game) {
  const ValidationReport report = validate(game);
  if (!report.ok()) {
    throw Error(ErrorCode::kInvalidGame, report.violations.front());
  }
  const std::size_t d = game.num_states();
  const double beta = game.beta;

  std::size_t rows = 0;
  std::vector<std::size_t> sizes;
  for (std::size_t s = 0; s < d; ++s) sizes.push_back(game.actions_one(s));
  for (std::size_t s = 0; s < d; ++s) sizes.push_back(game.actions_two(s));
  for (std::size_t m : sizes) rows += m;

  const auto di = static_cast<Eigen::Index>(d);
  Matrix a = Matrix::Zero(static_cast<Eigen::Index>(rows), 2 * di);
  Vector q(static_cast<Eigen::Index>(rows));

  Eigen::Index row = 0;
  for (std::size_t s = 0; s < d; ++s) {
    const auto si = static_cast<Eigen::Index>(s);
    for (Eigen::Index i = 0; i < game.p1[s].rows(); ++i, ++row) {
      const Eigen::RowVectorXd p = game.p1[s].row(i);
      a.block(row, 0, 1, di) = -beta * p;
      a.block(row, di, 1, di) = -beta * p;
      a(row, di + si) += 1.0;
      q(row) = -game.r1[s](i);
    }
  }
  for (std::size_t s = 0; s < d; ++s) {
    const auto si = static_cast<Eigen::Index>(s);
    for (Eigen::Index j = 0; j < game.p2[s].rows(); ++j, ++row) {
      const Eigen::RowVectorXd p = game.p2[s].row(j);
      a.block(row, 0, 1, di) = beta * p;
      a.block(row, di, 1, di) = beta * p;
      a(row, si) -= 1.0;
      q(row) = game.r2[s](j);
    }
  }

  VlcpInstance out;
  out.a.entries = std::move(a);
  out.a.block_sizes = std::move(sizes);
  out.q = std::move(q);
  out.num_states = d;
  for (std::size_t s = 0; s < d; ++s) {
    out.column_labels.push_back("eta(" + std::to_string(s + 1) + ")");
  }
  for (std::size_t s = 0; s < d; ++s) {
    out.column_labels.push_back("xi(" + std::to_string(s + 1) + ")");
  }
  return out;
}

SquareLcp to_equivalent_lcp(const VlcpInstance& vlcp) {
  const auto& sizes = vlcp.a.block_sizes;
  if (sizes.size() != vlcp.a.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "one block per column is required");
  }
  const auto n = static_cast<Eigen::Index>(vlcp.a.rows());
  SquareLcp lcp;
  lcp.m.resize(n, n);
  lcp.q = vlcp.q;
  lcp.num_states = vlcp.num_states;
  std::size_t first = 0;
  for (std::size_t j = 0; j < sizes.size(); ++j) {
    for (std::size_t c = 0; c < sizes[j]; ++c) {
      lcp.m.col(static_cast<Eigen::Index>(first + c)) =
          vlcp.a.entries.col(static_cast<Eigen::Index>(j));
    }
    lcp.blocks.push_back({first, sizes[j]});
    first += sizes[j];
  }
  if (static_cast<Eigen::Index>(first) != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "block sizes do not add up to the row count");
  }
  return lcp;
}

VlcpSolution recover_vlcp_solution(const SquareLcp& lcp, const Vector& z,
                                   const Vector& w, double tol) {
  const auto n = static_cast<Eigen::Index>(lcp.size());
  if (z.size() != n || w.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "z and w must have length n");
  }
  for (Eigen::Index p = 0; p < n; ++p) {
    if (z(p) < -tol || w(p) < -tol) {
      throw Error(ErrorCode::kPreconditionViolated,
                  "negative entry at index " + std::to_string(p + 1));
    }
    if (z(p) > tol && w(p) > tol) {
      throw Error(ErrorCode::kPreconditionViolated,
                  "complementarity breach at index " + std::to_string(p + 1));
    }
  }

  const std::size_t k = lcp.blocks.size();
  VlcpSolution sol;
  sol.x = Vector::Zero(static_cast<Eigen::Index>(k));
  sol.w = w;
  std::vector<std::size_t> chosen(k, 0);
  for (std::size_t j = 0; j < k; ++j) {
    const BlockRange b = lcp.blocks[j];
    const auto first = static_cast<Eigen::Index>(b.first);
    const auto count = static_cast<Eigen::Index>(b.count);
    const double xj = z.segment(first, count).sum();
    sol.x(static_cast<Eigen::Index>(j)) = xj;

    Eigen::Index binding = -1;
    for (Eigen::Index r = 0; r < count; ++r) {
      if (std::abs(w(first + r)) <= tol) {
        binding = r;
        break;
      }
    }
    if (binding < 0) {
      if (xj > tol) {
        throw Error(ErrorCode::kNoBindingRow,
                    "block " + std::to_string(j + 1) +
                        " has positive x but no binding row");
      }
      w.segment(first, count).minCoeff(&binding);
    }
    chosen[j] = static_cast<std::size_t>(binding);
  }

  const std::size_t d = lcp.num_states;
  if (d > 0 && k == 2 * d) {
    const auto di = static_cast<Eigen::Index>(d);
    sol.eta = sol.x.head(di);
    sol.xi = sol.x.tail(di);
    sol.value = sol.eta + sol.xi;
    sol.strategy_one.assign(chosen.begin(), chosen.begin() + di);
    sol.strategy_two.assign(chosen.begin() + di, chosen.end());
  }
  return sol;
}

Vbr0Conditions check_vbr0_sufficient(const AratGame& game) {
  Vbr0Conditions out{true, true};
  for (std::size_t s = 0; s < game.num_states(); ++s) {
    const auto si = static_cast<Eigen::Index>(s);
    const Matrix& p1 = game.p1[s];
    const Matrix& p2 = game.p2[s];
    for (Eigen::Index j = 0; j < p2.rows(); ++j) {
      if (!(p2(j, si) > 0.0)) out.holds_a = false;
    }
    for (Eigen::Index c = 0; c < p1.cols(); ++c) {
      if (p1.col(c).isZero(0.0)) out.holds_b = false;
    }
    if (p2.isZero(0.0)) out.holds_b = false;
  }
  return out;
}

bool verify_vbe_e(const SquareLcp& lcp, std::size_t guard) {
  const auto solutions =
      enumerate_lcp(lcp.m, Vector::Ones(lcp.q.size()), guard);
  return solutions.size() == 1 && solutions.front().z.isZero(0.0);
}

bool verify_vbr0_enum(const SquareLcp& lcp, std::size_t guard) {
  const std::size_t n = lcp.size();
  if (n > guard) {
    throw Error(ErrorCode::kSizeGuardExceeded,
                "n = " + std::to_string(n) + " exceeds " +
                    std::to_string(guard));
  }
  // LCP(0, M) is a cone; a nontrivial ray normalised to e'z = 1 solves
  // [M_aa; e'] z_a = [0; 1] on its support a.
  constexpr double kTol = 1e-10;
  const auto ni = static_cast<Eigen::Index>(n);
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<Eigen::Index> in;
    std::vector<Eigen::Index> out;
    for (Eigen::Index p = 0; p < ni; ++p) {
      ((mask >> p) & 1U ? in : out).push_back(p);
    }
    const auto s = static_cast<Eigen::Index>(in.size());
    Matrix sys(s + 1, s);
    Vector rhs = Vector::Zero(s + 1);
    for (Eigen::Index r = 0; r < s; ++r) {
      for (Eigen::Index c = 0; c < s; ++c) sys(r, c) = lcp.m(in[r], in[c]);
    }
    sys.row(s).setOnes();
    rhs(s) = 1.0;
    const Eigen::CompleteOrthogonalDecomposition<Matrix> cod(sys);
    const Vector za = cod.solve(rhs);
    if ((sys * za - rhs).norm() > kTol || za.minCoeff() < -kTol) continue;
    bool feasible = true;
    for (Eigen::Index r : out) {
      double wr = 0.0;
      for (Eigen::Index c = 0; c < s; ++c) wr += lcp.m(r, in[c]) * za(c);
      if (wr < -kTol) {
        feasible = false;
        break;
      }
    }
    if (feasible) return false;
  }
  return true;
}

}  // namespace arat
