#include "arat/tracer.hpp"

#include <algorithm>
#include <cmath>

#include "arat/corrector.hpp"
#include "arat/error.hpp"

namespace arat {
namespace {

// Residual/Jacobian adapters for the generic corrector.
struct WideSystem {
  const HomotopyInstance& inst;
  Vector residual(const Vector& z) const {
    return inst.eval(HomotopyPoint::unpack(z));
  }
  Matrix jacobian(const Vector& z) const {
    return inst.jac_full(HomotopyPoint::unpack(z));
  }
};

struct FixedTSystem {
  const HomotopyInstance& inst;
  double t;
  Vector residual(const Vector& u) const { return inst.eval({u, t}); }
  Matrix jacobian(const Vector& u) const { return inst.jac_u({u, t}); }
};

bool all_finite(const HomotopyPoint& p) {
  return p.u.allFinite() && std::isfinite(p.t);
}

double endpoint_tolerance(const HomotopyInstance& inst) {
  return 1e-6 * (1.0 + inst.q().norm());
}

}  // namespace

void TracerConfig::validate() const {
  auto fail = [](const char* what) {
    throw Error(ErrorCode::kPreconditionViolated, what);
  };
  if (!(eps1 > 0.0 && eps3 > eps1 && eps2 > eps3)) {
    fail("need eps2 > eps3 > eps1 > 0");
  }
  if (!(l0 > 0.0 && l0 < 1.0)) fail("l0 must lie in (0, 1)");
  if (m < 1 || m >= 50) fail("m must lie in [1, 50)");
  if (!(a0 >= 0.0)) fail("a0 must be nonnegative");
  if (!(r_accept > 0.0)) fail("r_accept must be positive");
  if (max_steps == 0) fail("max_steps must be positive");
  if (!(bound_b > 0.0)) fail("bound_b must be positive");
}

std::string_view to_string(TraceStatus status) {
  switch (status) {
    case TraceStatus::kConverged: return "Converged";
    case TraceStatus::kNoProgress: return "NoProgress";
    case TraceStatus::kMaxSteps: return "MaxSteps";
    case TraceStatus::kPathUnbounded: return "PathUnbounded";
    case TraceStatus::kSingularJacobian: return "SingularJacobian";
    case TraceStatus::kNonComplementaryLimit: return "NonComplementaryLimit";
  }
  return "Unknown";
}

Tangent tangent(const HomotopyInstance& inst, const HomotopyPoint& p,
                bool initial) {
  const Matrix ju = inst.jac_u(p);
  const Eigen::PartialPivLU<Matrix> lu(ju);
  const double rcond = lu.rcond();
  if (!(rcond > 1.0 / kConditionGuard)) {
    throw Error(ErrorCode::kSingularJacobian,
                "jac_u condition estimate above guard");
  }
  // Sign of det from the permutation parity and the diagonal of U.
  int sign = static_cast<int>(lu.permutationP().determinant());
  const auto diag = lu.matrixLU().diagonal();
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    if (diag(i) < 0.0) sign = -sign;
  }

  const Vector s = lu.solve(inst.jac_t(p));
  Vector xi(s.size() + 1);
  xi.head(s.size()) = s;
  xi(s.size()) = -1.0;
  xi /= xi.norm();

  Tangent out;
  out.det_sign = sign;
  out.direction = (initial || sign > 0) ? xi : Vector(-xi);
  return out;
}

HomotopyPoint correct(const HomotopyInstance& inst, const HomotopyPoint& p,
                      int m) {
  const WideSystem sys{inst};
  return HomotopyPoint::unpack(corrector<WideSystem, double>(sys, p.packed(), m));
}

HomotopyPoint correct_fixed_t(const HomotopyInstance& inst,
                              const HomotopyPoint& p, double tol,
                              int max_passes) {
  const FixedTSystem sys{inst, p.t};
  Vector u = p.u;
  double r = sys.residual(u).norm();
  for (int k = 0; k < max_passes && r > tol; ++k) {
    Vector next = corrector_pass<FixedTSystem, double>(sys, u);
    const double rn = sys.residual(next).norm();
    if (!std::isfinite(rn) || rn >= r) break;
    u = std::move(next);
    r = rn;
  }
  return {u, p.t};
}

bool passes_gate(const HomotopyInstance& inst, const HomotopyPoint& p,
                 PositivityGate gate) {
  const Vector x = p.x();
  if (gate == PositivityGate::kFull) {
    return p.u.minCoeff() > 0.0 && (inst.a() * x + inst.q()).minCoeff() > 0.0;
  }
  return x.minCoeff() > 0.0 && p.y2().minCoeff() > 0.0 &&
         (inst.a() * x + inst.q()).minCoeff() > 0.0;
}

EndpointCheck check_endpoint(const HomotopyInstance& inst,
                             const HomotopyPoint& p) {
  EndpointCheck c;
  const Vector x = p.x();
  const Vector w = inst.a() * x + inst.q();
  c.residual = inst.eval(p).norm();
  c.min_entry = std::min(x.minCoeff(), w.minCoeff());
  c.max_product = x.cwiseProduct(w).cwiseAbs().maxCoeff();
  c.residual_ok = c.residual <= endpoint_tolerance(inst);
  c.complementary = c.min_entry >= -kVlcpTolerance && c.max_product <= 1e-6;
  return c;
}

TraceResult trace(const HomotopyInstance& inst, const TracerConfig& config) {
  config.validate();
  if (!inst.start_is_interior()) {
    throw Error(ErrorCode::kPreconditionViolated,
                "start point is not strictly interior");
  }

  TraceResult result;
  HomotopyPoint z = inst.start();
  result.path.push_back({z, inst.eval(z).norm(), 0.0, 1, 0});
  const double land_tol = 1e-3 * endpoint_tolerance(inst);

  auto finish = [&](TraceStatus status, const HomotopyPoint& at,
                    std::string message) {
    result.status = status;
    result.final = at;
    result.message = std::move(message);
    if (status == TraceStatus::kConverged) {
      const Vector x = at.x();
      result.lcp_solution = LcpPair{x, inst.a() * x + inst.q()};
    }
    return result;
  };
  auto accept = [&](const HomotopyPoint& p, double a, int sign) {
    ++result.counts.accepted;
    result.path.push_back(
        {p, inst.eval(p).norm(), a, sign, result.counts.accepted});
  };
  // Settles a point onto t = 0 and classifies it.
  auto settle = [&](const HomotopyPoint& from) -> std::optional<HomotopyPoint> {
    try {
      return correct_fixed_t(inst, {from.u, 0.0}, land_tol);
    } catch (const Error&) {
      return std::nullopt;
    }
  };

  for (;;) {
    if (result.counts.accepted >= config.max_steps) {
      return finish(TraceStatus::kMaxSteps, z, "step limit reached");
    }
    const bool initial = result.counts.accepted == 0;
    Tangent tan;
    try {
      tan = tangent(inst, z, initial);
    } catch (const Error& e) {
      return finish(TraceStatus::kSingularJacobian, z, e.what());
    }
    const Vector& tau = tan.direction;
    const double tau_t = tau(tau.size() - 1);

    // Length at which the predictor reaches t = 0, if it heads there.
    const double to_zero = tau_t < 0.0 ? z.t / -tau_t : -1.0;
    bool landing_tried = false;

    for (int l = 0;; ++l) {
      const double a = std::pow(config.l0, l);
      const bool crosses = to_zero > 0.0 && a >= to_zero;

      if (crosses && config.land_at_zero && !landing_tried) {
        landing_tried = true;
        HomotopyPoint pred{z.u + to_zero * tau.head(z.u.size()), 0.0};
        ++result.counts.corrector_passes;
        if (auto cand = settle(pred)) {
          const EndpointCheck chk = check_endpoint(inst, *cand);
          if (chk.ok()) {
            accept(*cand, to_zero, tan.det_sign);
            return finish(TraceStatus::kConverged, *cand, "landed on t = 0");
          }
          if (chk.residual_ok && chk.min_entry >= -kVlcpTolerance) {
            accept(*cand, to_zero, tan.det_sign);
            return finish(TraceStatus::kNonComplementaryLimit, *cand,
                          "t = 0 point with x_i (Ax+q)_i = " +
                              std::to_string(chk.max_product));
          }
        }
        ++result.counts.rejected;
        // Retry with ordinary steps that stop short of t = 0.
        while (std::pow(config.l0, l + 1) >= to_zero) ++l;
        continue;
      }

      const HomotopyPoint pred{z.u + a * tau.head(z.u.size()), z.t + a * tau_t};
      HomotopyPoint cand;
      bool solved = true;
      try {
        cand = correct(inst, pred, config.m);
        result.counts.corrector_passes += static_cast<std::size_t>(config.m);
      } catch (const Error&) {
        solved = false;
      }
      solved = solved && all_finite(cand);

      const double dt = solved ? std::abs(cand.t - z.t) : 0.0;
      // t has to move by a sane amount.
      if (solved && !(dt > 0.0 && dt < 1.0)) {
        const double moved = std::min(a, (cand.packed() - z.packed()).norm());
        if (moved > config.a0 && a > config.eps3) {
          ++result.counts.rejected;
          continue;
        }
      }
      // Residual and positivity gate. The path never climbs back above
      // t = 1; a point up there means the step jumped a turn.
      double r = solved ? inst.eval(cand).norm() : INFINITY;
      if (solved && r <= config.r_accept && cand.t <= 1.0 &&
          passes_gate(inst, cand, config.gate)) {
        accept(cand, a, tan.det_sign);
        z = cand;
        break;
      }
      ++result.counts.rejected;
      if (a > config.eps3) continue;

      // Out of step sizes: accept a stall only right next to t = 0.
      if (solved && dt < config.eps2 && std::abs(cand.t) < config.eps2) {
        if (auto end = settle(z)) {
          const EndpointCheck chk = check_endpoint(inst, *end);
          if (chk.ok()) {
            accept(*end, std::abs(z.t), tan.det_sign);
            return finish(TraceStatus::kConverged, *end,
                          "stalled within eps2 of t = 0");
          }
        }
      }
      return finish(TraceStatus::kNoProgress, z,
                    solved ? "no acceptable step" : "corrector failed");
    }

    if (z.u.lpNorm<Eigen::Infinity>() > config.bound_b) {
      return finish(TraceStatus::kPathUnbounded, z, "path left the bound");
    }
    // Close enough to t = 0.
    if (std::abs(z.t) <= config.eps1) {
      auto end = settle(z);
      if (end && check_endpoint(inst, *end).ok()) {
        return finish(TraceStatus::kConverged, *end, "t within eps1");
      }
      return finish(TraceStatus::kNonComplementaryLimit, z,
                    "t within eps1 but the endpoint fails the certificate");
    }
  }
}

VlcpSolution extract_solution(const TraceResult& result, const SquareLcp& lcp) {
  if (result.status != TraceStatus::kConverged || !result.lcp_solution) {
    throw Error(ErrorCode::kNotConverged,
                "trace status " + std::string(to_string(result.status)));
  }
  Vector z = result.lcp_solution->z;
  if (z.size() != lcp.q.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "endpoint size differs from LCP");
  }
  Vector w = lcp.m * z + lcp.q;
  const double scale = 1.0 + lcp.q.lpNorm<Eigen::Infinity>();
  const double gate = 1e-5 * scale;
  const Eigen::Index n = z.size();

  const double worst = n > 0 ? z.cwiseProduct(w).cwiseAbs().maxCoeff() : 0.0;
  const double low = n > 0 ? std::min(z.minCoeff(), w.minCoeff()) : 0.0;
  if (worst > gate || low < -gate) {
    throw Error(ErrorCode::kComplementarityResidualTooLarge,
                "max |z_i w_i| = " + std::to_string(worst) +
                    ", min entry = " + std::to_string(low));
  }

  // Purify: re-solve the system on the support {z_i > w_i} and keep the
  // exact point when it stays feasible and close.
  std::vector<Eigen::Index> in;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (z(i) > w(i)) in.push_back(i);
  }
  const auto s = static_cast<Eigen::Index>(in.size());
  Vector exact = Vector::Zero(n);
  if (s > 0) {
    Matrix sub(s, s);
    Vector rhs(s);
    for (Eigen::Index r = 0; r < s; ++r) {
      rhs(r) = -lcp.q(in[r]);
      for (Eigen::Index c = 0; c < s; ++c) sub(r, c) = lcp.m(in[r], in[c]);
    }
    const Eigen::CompleteOrthogonalDecomposition<Matrix> cod(sub);
    const Vector za = cod.solve(rhs);
    for (Eigen::Index r = 0; r < s; ++r) exact(in[r]) = za(r);
  }
  const Vector exact_w = lcp.m * exact + lcp.q;
  const double tight = 1e-10 * scale;
  const bool usable =
      (n == 0) ||
      (exact.minCoeff() >= -tight && exact_w.minCoeff() >= -tight &&
       exact.cwiseProduct(exact_w).cwiseAbs().maxCoeff() <= tight &&
       (exact - z).lpNorm<Eigen::Infinity>() <= 1e-4 * scale);
  if (usable) {
    z = exact;
    w = exact_w;
  }
  // Clamp what is left within tolerance.
  for (Eigen::Index i = 0; i < n; ++i) {
    if (z(i) < 0.0) z(i) = 0.0;
    if (w(i) < 0.0) w(i) = 0.0;
    if (z(i) <= w(i)) {
      if (z(i) <= kVlcpTolerance) z(i) = 0.0;
    } else if (w(i) <= kVlcpTolerance) {
      w(i) = 0.0;
    }
  }
  return recover_vlcp_solution(lcp, z, w);
}

}  // namespace arat
