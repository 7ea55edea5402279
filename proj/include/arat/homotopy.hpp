#pragma once

#include <cstddef>
#include <optional>

#include "arat/game.hpp"
#include "arat/vlcp.hpp"

namespace arat {

/// A point (u, t) of the homotopy, u = (x, y1, y2) stacked into one 3n vector.
struct HomotopyPoint {
  Vector u;
  double t = 1.0;

  std::size_t n() const { return static_cast<std::size_t>(u.size() / 3); }
  auto x() const { return u.head(u.size() / 3); }
  auto y1() const { return u.segment(u.size() / 3, u.size() / 3); }
  auto y2() const { return u.tail(u.size() / 3); }

  /// (u, t) as one 3n + 1 vector.
  Vector packed() const;
  static HomotopyPoint unpack(const Vector& z);
  static HomotopyPoint from_parts(const Vector& x, const Vector& y1,
                                  const Vector& y2, double t);
};

/// H(u, t) = [ (1-t)((A+A')x + q - y1 - A'y2) + t(x - x0)
///             Y1 x - t Y1_0 x0 + (1-t) X (Ax + q)
///             Y2 (Ax + q) - t Y2_0 (A x0 + q) ]
/// for the square LCP (A, q) and start point u0 = (x0, y1_0, y2_0).
class HomotopyInstance {
 public:
  /// y1_0 and y2_0 default to the all-ones vector.
  HomotopyInstance(Matrix a, Vector q, Vector x0,
                   std::optional<Vector> y1_0 = std::nullopt,
                   std::optional<Vector> y2_0 = std::nullopt);

  std::size_t n() const { return static_cast<std::size_t>(q_.size()); }
  const Matrix& a() const { return a_; }
  const Vector& q() const { return q_; }
  const Vector& x0() const { return x0_; }
  const Vector& y1_0() const { return y1_0_; }
  const Vector& y2_0() const { return y2_0_; }
  HomotopyPoint start() const;

  /// x0 > 0, y1_0 > 0, y2_0 > 0 and A x0 + q > 0.
  bool start_is_interior() const;

  Vector eval(const HomotopyPoint& p) const;

  /// dH/du, 3n x 3n.
  Matrix jac_u(const HomotopyPoint& p) const;
  /// dH/dt, length 3n.
  Vector jac_t(const HomotopyPoint& p) const;
  /// [dH/du | dH/dt], 3n x (3n + 1).
  Matrix jac_full(const HomotopyPoint& p) const;
  /// dH/du0 (derivative with respect to the start point), 3n x 3n.
  Matrix jac_u0(double t) const;
  /// Closed form of det(dH/du0): (-1)^{3n} t^{3n} prod x0_i (A x0 + q)_i.
  double jac_u0_det_formula(double t) const;

  /// The t = 0 system, evaluated independently of eval():
  /// [(A+A')x + q - y1 - A'y2; Y1 x + X(Ax + q); Y2(Ax + q)].
  Vector limit_system(const Vector& u) const;

 private:
  Matrix a_;
  Matrix sym_;  // A + A'
  Vector q_;
  Vector x0_;
  Vector y1_0_;
  Vector y2_0_;
  Vector w0_;   // A x0 + q
};

struct InteriorPointOptions {
  /// Tried first; accepted iff strictly feasible.
  std::optional<Vector> hint;
  /// Discount factor of the source game, used to size the start.
  std::optional<double> beta;
  double eps = 1e-2;
  std::size_t max_doublings = 60;
  /// A candidate is taken at once when min(M x + q) >= min_slack (1 + |q|_inf);
  /// otherwise the feasible candidate with the largest slack wins.
  double min_slack = 1e-2;
};

/// x0 > 0 with M x0 + q > 0. Throws kNoInteriorPointFound.
///
/// For LCPs built from a game the eta copies get a small share and the xi
/// copies a large one, K doubling from max(1, 4/3 |q|_inf, |q|_inf/(1-beta)).
/// The eta share tries K/2, K/4, K/10 before falling back to eps. Values are
/// divided by the block size so every VLCP column receives the same total.
/// Thin candidates (see min_slack) are skipped while better ones remain.
Vector find_interior_point(const SquareLcp& lcp,
                           const InteriorPointOptions& options = {});

}  // namespace arat
