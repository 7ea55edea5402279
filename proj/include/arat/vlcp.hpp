#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "arat/game.hpp"

namespace arat {

/// Feasibility and complementarity tolerance for VLCP points.
inline constexpr double kVlcpTolerance = 1e-8;

/// Default cap on n for the exhaustive 2^n support enumeration.
inline constexpr std::size_t kEnumerationGuard = 20;

/// m x k matrix whose rows are grouped into k consecutive blocks; block j
/// holds block_sizes[j] rows and is complementary to column j.
struct VerticalBlockMatrix {
  Matrix entries;
  std::vector<std::size_t> block_sizes;

  std::size_t rows() const { return static_cast<std::size_t>(entries.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(entries.cols()); }
};

/// VLCP built from an ARAT game. Columns 0..d-1 are eta(s), columns d..2d-1
/// are xi(s). Rows: player I (state-major, action-minor), then player II.
struct VlcpInstance {
  VerticalBlockMatrix a;
  Vector q;
  std::vector<std::string> column_labels;
  std::size_t num_states = 0;
};

/// A point of LCP(q, M): w = M z + q.
struct LcpPair {
  Vector z;
  Vector w;
};

struct BlockRange {
  std::size_t first = 0;
  std::size_t count = 0;
};

/// Equivalent square LCP: column j of the VLCP matrix copied block_sizes[j]
/// times. blocks[j] is the index range of those copies. num_states is d when
/// the LCP comes from a game and 0 for a free-standing LCP.
struct SquareLcp {
  Matrix m;
  Vector q;
  std::vector<BlockRange> blocks;
  std::size_t num_states = 0;

  std::size_t size() const { return static_cast<std::size_t>(q.size()); }

  /// LCP with every block of size one (no copies).
  static SquareLcp plain(Matrix m, Vector q);
};

struct VlcpSolution {
  Vector x;      // eta then xi
  Vector w;      // VLCP slack, one entry per row of the block matrix
  Vector eta;
  Vector xi;
  Vector value;  // eta + xi; empty for non-game LCPs
  std::vector<std::size_t> strategy_one;
  std::vector<std::size_t> strategy_two;
};

VlcpInstance build_vlcp(const AratGame& game);

SquareLcp to_equivalent_lcp(const VlcpInstance& vlcp);

/// Folds the copies of an LCP solution back onto the VLCP and reads off the
/// value vector and pure strategies (smallest binding action).
/// Throws kPreconditionViolated when (z, w) is not an LCP point within
/// kVlcpTolerance and kNoBindingRow when a positive x_j has no binding row.
VlcpSolution recover_vlcp_solution(const SquareLcp& lcp, const Vector& z,
                                   const Vector& w,
                                   double tol = kVlcpTolerance);

struct Vbr0Conditions {
  bool holds_a = false;  // every p2(s, j, s) > 0
  bool holds_b = false;  // P1(s) has no zero column and P2(s) != 0, all s
};

Vbr0Conditions check_vbr0_sufficient(const AratGame& game);

/// LCP(e, M) has (w, z) = (e, 0) as its only solution. Enumerates supports.
bool verify_vbe_e(const SquareLcp& lcp, std::size_t guard = kEnumerationGuard);

/// LCP(0, M) has (0, 0) as its only solution. Enumerates supports.
bool verify_vbr0_enum(const SquareLcp& lcp,
                      std::size_t guard = kEnumerationGuard);

}  // namespace arat
