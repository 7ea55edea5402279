#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "arat/homotopy.hpp"
#include "arat/vlcp.hpp"

namespace arat {

/// Which components of an accepted point must stay strictly positive.
enum class PositivityGate {
  kPrimal,  // x > 0, y2 > 0 and Ax + q > 0; y1 is left free
  kFull,    // every component of u
};

struct TracerConfig {
  double eps1 = 1e-7;
  double eps2 = 1e-3;
  double eps3 = 1e-5;
  double l0 = 0.5;
  int m = 2;
  double a0 = 1e-8;
  double r_accept = 1.0;
  std::size_t max_steps = 10000;
  double bound_b = 1e8;
  PositivityGate gate = PositivityGate::kPrimal;
  /// Predictor steps that would cross t = 0 are cut to land on it and are
  /// then corrected at fixed t = 0.
  bool land_at_zero = true;

  /// Throws kPreconditionViolated on inconsistent settings.
  void validate() const;
};

enum class TraceStatus {
  kConverged,
  kNoProgress,
  kMaxSteps,
  kPathUnbounded,
  kSingularJacobian,
  kNonComplementaryLimit,  // t = 0 reached at a point with x_i (Ax+q)_i != 0
};

std::string_view to_string(TraceStatus status);

struct PathPoint {
  HomotopyPoint point;
  double residual = 0.0;     // ||H||_2
  double step_length = 0.0;  // predictor length a
  int det_sign = 1;          // orientation applied to the predictor
  std::size_t step_index = 0;
};

struct TraceCounts {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t corrector_passes = 0;
};

struct TraceResult {
  TraceStatus status = TraceStatus::kNoProgress;
  std::vector<PathPoint> path;  // starts with (u0, 1)
  HomotopyPoint final;
  std::optional<LcpPair> lcp_solution;  // set iff converged
  TraceCounts counts;
  std::string message;
};

struct Tangent {
  Vector direction;  // unit, length 3n + 1
  int det_sign = 1;  // sign of det(jac_u)
};

/// xi = (s, -1)/||(s, -1)||, s = jac_u^-1 jac_t. The initial tangent is xi;
/// later ones are xi or -xi by the sign of det(jac_u).
/// Throws kSingularJacobian.
Tangent tangent(const HomotopyInstance& inst, const HomotopyPoint& p,
                bool initial);

/// m passes of the fifth-order corrector with the wide Jacobian.
/// Throws kSingularJacobian.
HomotopyPoint correct(const HomotopyInstance& inst, const HomotopyPoint& p,
                      int m);

/// Newton-type correction of u at fixed t with square jac_u solves.
/// Stops once ||H|| <= tol or after max_passes. Throws kSingularJacobian.
HomotopyPoint correct_fixed_t(const HomotopyInstance& inst,
                              const HomotopyPoint& p, double tol,
                              int max_passes = 50);

/// True when every accepted-point positivity condition of the gate holds.
bool passes_gate(const HomotopyInstance& inst, const HomotopyPoint& p,
                 PositivityGate gate);

/// Residual, feasibility and complementarity of a t = 0 point.
struct EndpointCheck {
  double residual = 0.0;
  double min_entry = 0.0;        // min over x and Ax + q
  double max_product = 0.0;      // max |x_i (Ax+q)_i|
  bool residual_ok = false;
  bool complementary = false;    // feasibility and products within tolerance

  bool ok() const { return residual_ok && complementary; }
};

EndpointCheck check_endpoint(const HomotopyInstance& inst,
                             const HomotopyPoint& p);

/// Follows the path from (u0, 1) toward t = 0. Numerical failures come back
/// as statuses. Throws kPreconditionViolated when u0 is not interior.
TraceResult trace(const HomotopyInstance& inst, const TracerConfig& config = {});

/// Reads the LCP point off a converged trace and maps it back onto the VLCP.
/// Throws kNotConverged and kComplementarityResidualTooLarge.
VlcpSolution extract_solution(const TraceResult& result, const SquareLcp& lcp);

}  // namespace arat
