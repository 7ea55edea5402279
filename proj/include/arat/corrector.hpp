#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <string>

#include "arat/error.hpp"

namespace arat {

template <class Scalar>
using VectorT = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <class Scalar>
using MatrixT = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Largest accepted ratio between extreme diagonal entries of the triangular
/// factor before a Jacobian is called singular.
inline constexpr double kConditionGuard = 1e12;

/// Minimum-norm solution of J d = rhs for J with rows <= cols and full row
/// rank. Uses a complete orthogonal decomposition instead of J'(JJ')^-1.
/// Throws kSingularJacobian when the row rank is deficient.
template <class Scalar>
VectorT<Scalar> min_norm_solve(const MatrixT<Scalar>& j,
                               const VectorT<Scalar>& rhs) {
  using std::abs;
  if (j.rows() != rhs.size() || j.rows() > j.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "min_norm_solve needs a square or wide system");
  }
  const Eigen::CompleteOrthogonalDecomposition<MatrixT<Scalar>> cod(j);
  if (cod.rank() < j.rows()) {
    throw Error(ErrorCode::kSingularJacobian,
                "rank " + std::to_string(cod.rank()) + " < " +
                    std::to_string(j.rows()));
  }
  const auto diag = cod.matrixQTZ().diagonal().head(j.rows());
  Scalar hi = 0;
  Scalar lo = std::numeric_limits<Scalar>::infinity();
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    hi = std::max<Scalar>(hi, abs(diag(i)));
    lo = std::min<Scalar>(lo, abs(diag(i)));
  }
  if (!(lo > 0) || hi / lo > Scalar(kConditionGuard)) {
    throw Error(ErrorCode::kSingularJacobian, "condition estimate above guard");
  }
  return cod.solve(rhs);
}

/// One pass of the composed three-stage corrector:
///   K  = J(I)^+ H(I),          L  = I - K
///   KK = (J(L) + J(I))^+ H(I), LL = I - 2 KK
///   I' = LL - J(L)^+ H(LL)
/// The system must provide residual(z) and jacobian(z) with matching
/// Scalar type; the Jacobian may be square or wide.
template <class System, class Scalar>
VectorT<Scalar> corrector_pass(const System& sys, const VectorT<Scalar>& i0) {
  const VectorT<Scalar> h0 = sys.residual(i0);
  const MatrixT<Scalar> j0 = sys.jacobian(i0);
  const VectorT<Scalar> l = i0 - min_norm_solve<Scalar>(j0, h0);
  const MatrixT<Scalar> jl = sys.jacobian(l);
  const MatrixT<Scalar> jsum = jl + j0;
  const VectorT<Scalar> ll = i0 - Scalar(2) * min_norm_solve<Scalar>(jsum, h0);
  return ll - min_norm_solve<Scalar>(jl, sys.residual(ll));
}

template <class System, class Scalar>
VectorT<Scalar> corrector(const System& sys, VectorT<Scalar> z, int passes) {
  for (int k = 0; k < passes; ++k) z = corrector_pass<System, Scalar>(sys, z);
  return z;
}

}  // namespace arat
