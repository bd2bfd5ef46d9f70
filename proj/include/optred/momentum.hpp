#pragma once

// Momentum map J(q, p) = (q1 x p1 + q2 x p2, p1 + p2) of the SE(3) action,
// its derivative, and the rank-based quantities built on it.

#include <Eigen/Dense>

#include "optred/euclid.hpp"
#include "optred/tolerance.hpp"

namespace optred {

template <typename Scalar>
using Jacobian6x12 = Eigen::Matrix<Scalar, 6, 12>;

template <typename Scalar>
MomentumValue_<Scalar> momentum_map(const PhasePoint_<Scalar>& m) {
  return {m.q1.cross(m.p1) + m.q2.cross(m.p2), m.p1 + m.p2};
}

/// Exact Jacobian of momentum_map in the coordinate order (q1, q2, p1, p2);
/// rows 0-2 are alpha, rows 3-5 are u.
template <typename Scalar>
Jacobian6x12<Scalar> momentum_jacobian(const PhasePoint_<Scalar>& m) {
  Jacobian6x12<Scalar> J = Jacobian6x12<Scalar>::Zero();
  // q x p = -hat(p) q = hat(q) p
  J.template block<3, 3>(0, 0) = -hat(m.p1);
  J.template block<3, 3>(0, 3) = -hat(m.p2);
  J.template block<3, 3>(0, 6) = hat(m.q1);
  J.template block<3, 3>(0, 9) = hat(m.q2);
  J.template block<3, 3>(3, 6).setIdentity();
  J.template block<3, 3>(3, 9).setIdentity();
  return J;
}

/// |q1||p1| + |q2||p2|: the natural magnitude against which alpha is compared.
template <typename Scalar>
Scalar angular_scale(const PhasePoint_<Scalar>& m) {
  return m.q1.norm() * m.p1.norm() + m.q2.norm() * m.p2.norm();
}

/// Numerical rank from singular values, threshold relative to the largest.
template <typename Derived>
int numerical_rank(const Eigen::MatrixBase<Derived>& M, double rel = kDefaultTolerance.rank,
                   double reference = -1.0) {
  if (M.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M.template cast<double>());
  const auto& s = svd.singularValues();
  const double ref = reference > 0 ? reference : (s.size() ? s(0) : 0.0);
  if (ref <= 0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel * ref) ++r;
  return r;
}

/// T_mJ is surjective unless p1, p2 and q1 - q2 all lie on one line through the origin.
bool is_regular(const PhasePoint& m, const Tolerance& tol = kDefaultTolerance);

/// dim E(m) = dim(Ker T_mJ  n  T_m M_{G_m}). Throws NumericalError when the
/// isotropy stratum of m cannot be decided reliably.
int char_distribution_dim(const PhasePoint& m, const Tolerance& tol = kDefaultTolerance);

}  // namespace optred
