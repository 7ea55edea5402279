#include "arat/homotopy.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "arat/error.hpp"

namespace arat {

Vector HomotopyPoint::packed() const {
  Vector z(u.size() + 1);
  z.head(u.size()) = u;
  z(u.size()) = t;
  return z;
}

HomotopyPoint HomotopyPoint::unpack(const Vector& z) {
  if (z.size() < 1 || (z.size() - 1) % 3 != 0) {
    throw Error(ErrorCode::kDimensionMismatch, "packed point must be 3n + 1");
  }
  return {z.head(z.size() - 1), z(z.size() - 1)};
}

HomotopyPoint HomotopyPoint::from_parts(const Vector& x, const Vector& y1,
                                        const Vector& y2, double t) {
  if (y1.size() != x.size() || y2.size() != x.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "x, y1, y2 must match");
  }
  HomotopyPoint p;
  p.u.resize(3 * x.size());
  p.u << x, y1, y2;
  p.t = t;
  return p;
}

HomotopyInstance::HomotopyInstance(Matrix a, Vector q, Vector x0,
                                   std::optional<Vector> y1_0,
                                   std::optional<Vector> y2_0)
    : a_(std::move(a)), q_(std::move(q)), x0_(std::move(x0)) {
  const Eigen::Index n = q_.size();
  if (a_.rows() != n || a_.cols() != n || x0_.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "A must be n x n, x0 length n");
  }
  y1_0_ = y1_0 ? *y1_0 : Vector::Ones(n);
  y2_0_ = y2_0 ? *y2_0 : Vector::Ones(n);
  if (y1_0_.size() != n || y2_0_.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "y1_0, y2_0 must have length n");
  }
  sym_ = a_ + a_.transpose();
  w0_ = a_ * x0_ + q_;
}

HomotopyPoint HomotopyInstance::start() const {
  return HomotopyPoint::from_parts(x0_, y1_0_, y2_0_, 1.0);
}

bool HomotopyInstance::start_is_interior() const {
  return x0_.minCoeff() > 0.0 && y1_0_.minCoeff() > 0.0 &&
         y2_0_.minCoeff() > 0.0 && w0_.minCoeff() > 0.0;
}

Vector HomotopyInstance::eval(const HomotopyPoint& p) const {
  const Eigen::Index n = q_.size();
  if (p.u.size() != 3 * n) {
    throw Error(ErrorCode::kDimensionMismatch, "u must have length 3n");
  }
  const double t = p.t;
  const Vector x = p.x();
  const Vector y1 = p.y1();
  const Vector y2 = p.y2();
  const Vector w = a_ * x + q_;

  Vector h(3 * n);
  h.head(n) = (1.0 - t) * (sym_ * x + q_ - y1 - a_.transpose() * y2) +
              t * (x - x0_);
  h.segment(n, n) = y1.cwiseProduct(x) - t * y1_0_.cwiseProduct(x0_) +
                    (1.0 - t) * x.cwiseProduct(w);
  h.tail(n) = y2.cwiseProduct(w) - t * y2_0_.cwiseProduct(w0_);
  return h;
}

Matrix HomotopyInstance::jac_u(const HomotopyPoint& p) const {
  const Eigen::Index n = q_.size();
  const double t = p.t;
  const Vector x = p.x();
  const Vector w = a_ * x + q_;
  const Matrix eye = Matrix::Identity(n, n);

  Matrix j = Matrix::Zero(3 * n, 3 * n);
  j.block(0, 0, n, n) = (1.0 - t) * sym_ + t * eye;
  j.block(0, n, n, n) = -(1.0 - t) * eye;
  j.block(0, 2 * n, n, n) = -(1.0 - t) * a_.transpose();

  j.block(n, 0, n, n) = (1.0 - t) * (x.asDiagonal() * a_);
  j.block(n, 0, n, n).diagonal() += Vector(p.y1()) + (1.0 - t) * w;
  j.block(n, n, n, n).diagonal() = x;

  j.block(2 * n, 0, n, n) = Vector(p.y2()).asDiagonal() * a_;
  j.block(2 * n, 2 * n, n, n).diagonal() = w;
  return j;
}

Vector HomotopyInstance::jac_t(const HomotopyPoint& p) const {
  const Eigen::Index n = q_.size();
  const Vector x = p.x();
  const Vector w = a_ * x + q_;
  Vector g(3 * n);
  g.head(n) = (x - x0_) - (sym_ * x + q_ - Vector(p.y1()) -
                           a_.transpose() * Vector(p.y2()));
  g.segment(n, n) = -y1_0_.cwiseProduct(x0_) - x.cwiseProduct(w);
  g.tail(n) = -y2_0_.cwiseProduct(w0_);
  return g;
}

Matrix HomotopyInstance::jac_full(const HomotopyPoint& p) const {
  const Eigen::Index m = 3 * q_.size();
  Matrix j(m, m + 1);
  j.leftCols(m) = jac_u(p);
  j.col(m) = jac_t(p);
  return j;
}

Matrix HomotopyInstance::jac_u0(double t) const {
  const Eigen::Index n = q_.size();
  Matrix j = Matrix::Zero(3 * n, 3 * n);
  j.block(0, 0, n, n).diagonal().setConstant(-t);
  j.block(n, 0, n, n).diagonal() = -t * y1_0_;
  j.block(n, n, n, n).diagonal() = -t * x0_;
  j.block(2 * n, 0, n, n) = -t * (y2_0_.asDiagonal() * a_);
  j.block(2 * n, 2 * n, n, n).diagonal() = -t * w0_;
  return j;
}

double HomotopyInstance::jac_u0_det_formula(double t) const {
  const auto n = static_cast<int>(q_.size());
  const double sign = (3 * n) % 2 == 0 ? 1.0 : -1.0;
  return sign * std::pow(t, 3 * n) * x0_.prod() * w0_.prod();
}

Vector HomotopyInstance::limit_system(const Vector& u) const {
  const Eigen::Index n = q_.size();
  const Vector x = u.head(n);
  const Vector y1 = u.segment(n, n);
  const Vector y2 = u.tail(n);
  const Vector w = a_ * x + q_;
  Vector out(3 * n);
  out << sym_ * x + q_ - y1 - a_.transpose() * y2,
      y1.cwiseProduct(x) + x.cwiseProduct(w), y2.cwiseProduct(w);
  return out;
}

namespace {

bool strictly_feasible(const SquareLcp& lcp, const Vector& x) {
  return x.size() == lcp.q.size() && x.minCoeff() > 0.0 &&
         (lcp.m * x + lcp.q).minCoeff() > 0.0;
}

}  // namespace

Vector find_interior_point(const SquareLcp& lcp,
                           const InteriorPointOptions& options) {
  const Eigen::Index n = lcp.q.size();
  if (options.hint && strictly_feasible(lcp, *options.hint)) {
    return *options.hint;
  }
  if (n > 0 && lcp.q.minCoeff() > 0.0) {
    return Vector::Constant(n, options.eps);
  }

  const double qmax = lcp.q.lpNorm<Eigen::Infinity>();
  double k0 = std::max(1.0, 4.0 / 3.0 * qmax);
  if (options.beta && *options.beta < 1.0) {
    k0 = std::max(k0, qmax / (1.0 - *options.beta));
  }

  // Candidates that are feasible but hug the boundary make the path crawl;
  // they are kept only as a fallback.
  const double margin = options.min_slack * (1.0 + qmax);
  std::optional<Vector> best;
  double best_slack = 0.0;
  auto consider = [&](const Vector& x) {
    if (x.minCoeff() <= 0.0) return false;
    const double slack = (lcp.m * x + lcp.q).minCoeff();
    if (slack <= 0.0) return false;
    if (!best || slack > best_slack) {
      best = x;
      best_slack = slack;
    }
    return slack >= margin;
  };

  const std::size_t d = lcp.num_states;
  if (d == 0 || lcp.blocks.size() != 2 * d) {
    for (std::size_t k = 0; k <= options.max_doublings; ++k) {
      const Vector x = Vector::Constant(n, std::ldexp(k0, static_cast<int>(k)));
      if (consider(x)) return x;
    }
    if (best) return *best;
    throw Error(ErrorCode::kNoInteriorPointFound, "uniform schedule exhausted");
  }

  // eta columns are the first d blocks, xi columns the last d.
  const double shares[] = {0.5, 0.25, 0.1, 0.0};
  for (double share : shares) {
    for (std::size_t k = 0; k <= options.max_doublings; ++k) {
      const double big = std::ldexp(k0, static_cast<int>(k));
      const double small = share > 0.0 ? share * big : options.eps;
      Vector x(n);
      for (std::size_t j = 0; j < lcp.blocks.size(); ++j) {
        const BlockRange b = lcp.blocks[j];
        const double total = j < d ? small : big;
        x.segment(static_cast<Eigen::Index>(b.first),
                  static_cast<Eigen::Index>(b.count))
            .setConstant(total / static_cast<double>(b.count));
      }
      if (consider(x)) return x;
    }
  }
  if (best) return *best;
  throw Error(ErrorCode::kNoInteriorPointFound, "ARAT schedule exhausted");
}

}  // namespace arat
