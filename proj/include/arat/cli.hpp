#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "arat/game.hpp"
#include "arat/oracle.hpp"
#include "arat/tracer.hpp"
#include "arat/vlcp.hpp"

namespace arat {

struct SolveOptions {
  std::optional<double> beta_override;
  std::optional<Vector> x0_hint;  // tried first, dropped if not interior
  TracerConfig tracer;
  bool shift_rewards = false;
  double certify_tol = 1e-4;
  /// Retries after NonComplementaryLimit or NoProgress, each from
  /// restart_scale * x0.
  std::size_t restarts = 3;
  double restart_scale = 4.0;
};

struct SolveReport {
  std::string start_source;  // "hint" or "auto"
  Vector x0;               // start of the last trace
  std::size_t restarts = 0;
  double shift_one = 0.0;    // added to every r1 entry before solving
  double shift_two = 0.0;
  TraceResult trace;
  std::optional<VlcpSolution> solution;  // value already unshifted
  std::optional<CertificateReport> certificate;
  std::string failure;  // set when extraction or certification could not run
  std::vector<std::string> notices;

  bool converged() const { return trace.status == TraceStatus::kConverged; }
  bool ok() const {
    return converged() && solution && certificate && certificate->passed();
  }
};

/// Full pipeline: VLCP, square LCP, start point, trace, extraction and
/// certification against value iteration on the original game.
/// Throws kInvalidGame and kNoInteriorPointFound.
SolveReport solve_game(AratGame game, const SolveOptions& options);

/// Machine-readable form of a report; no timings, so equal runs give equal
/// bytes. Strategies are 1-based.
nlohmann::json report_json(const SolveReport& report);

/// Matrices of the construction (VLCP matrix, q, square M, copy ranges).
nlohmann::json build_json(const AratGame& game);

/// Value iteration plus the support enumeration when n is within the guard.
nlohmann::json oracle_json(const AratGame& game);

/// Entry point of the command-line tool. Returns the process exit code:
/// 0 ok, 1 not converged / not certified / invalid game, 2 I/O or parse,
/// 3 no interior point.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace arat
