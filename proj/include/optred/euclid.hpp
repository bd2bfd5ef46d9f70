#pragma once

// The Euclidean group SE(3) = SO(3) x| R^3 acting on the two-body phase space
// T*(R^3 x R^3) by cotangent lift, and on se(3)* by the coadjoint action.

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>

#include "optred/errors.hpp"

namespace optred {

template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;

template <typename Scalar>
using Mat3 = Eigen::Matrix<Scalar, 3, 3>;

template <typename Scalar>
using Vec12 = Eigen::Matrix<Scalar, 12, 1>;

using Vec3d = Vec3<double>;
using Mat3d = Mat3<double>;
using Vec12d = Vec12<double>;

/// Cross-product matrix: hat(v) * w == v.cross(w).
template <typename Derived>
Mat3<typename Derived::Scalar> hat(const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  Mat3<Scalar> m;
  m << Scalar(0), -v(2), v(1),
       v(2), Scalar(0), -v(0),
       -v(1), v(0), Scalar(0);
  return m;
}

/// Approximate equality with relative tolerance scaled by operand magnitude and an absolute floor.
template <typename DA, typename DB>
bool approx_equal(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b,
                  double rel = 1e-10, double abs_floor = 1e-12) {
  const double scale = std::max(a.norm(), b.norm());
  return (a - b).norm() <= std::max(rel * scale, abs_floor);
}

/// A point (q1, q2, p1, p2) of the 12-dimensional phase space.
template <typename Scalar>
struct PhasePoint_ {
  Vec3<Scalar> q1 = Vec3<Scalar>::Zero();
  Vec3<Scalar> q2 = Vec3<Scalar>::Zero();
  Vec3<Scalar> p1 = Vec3<Scalar>::Zero();
  Vec3<Scalar> p2 = Vec3<Scalar>::Zero();

  PhasePoint_() = default;
  PhasePoint_(const Vec3<Scalar>& a, const Vec3<Scalar>& b, const Vec3<Scalar>& c,
              const Vec3<Scalar>& d)
      : q1(a), q2(b), p1(c), p2(d) {}

  /// Stacked coordinates in the order (q1, q2, p1, p2).
  Vec12<Scalar> vector() const {
    Vec12<Scalar> v;
    v << q1, q2, p1, p2;
    return v;
  }

  template <typename Derived>
  static PhasePoint_ from_vector(const Eigen::MatrixBase<Derived>& v) {
    return {v.template segment<3>(0), v.template segment<3>(3), v.template segment<3>(6),
            v.template segment<3>(9)};
  }

  /// Largest of the four component norms.
  Scalar scale() const {
    return std::max({q1.norm(), q2.norm(), p1.norm(), p2.norm()});
  }

  bool all_finite() const { return vector().allFinite(); }
};

/// A momentum value (alpha, u) in se(3)* ~ R^3 x R^3: angular and linear momentum.
template <typename Scalar>
struct MomentumValue_ {
  Vec3<Scalar> alpha = Vec3<Scalar>::Zero();
  Vec3<Scalar> u = Vec3<Scalar>::Zero();

  MomentumValue_() = default;
  MomentumValue_(const Vec3<Scalar>& a, const Vec3<Scalar>& b) : alpha(a), u(b) {}

  Eigen::Matrix<Scalar, 6, 1> vector() const {
    Eigen::Matrix<Scalar, 6, 1> v;
    v << alpha, u;
    return v;
  }
};

/// A rotation-translation pair (A, a) with the semidirect product law.
template <typename Scalar>
struct SE3_ {
  Mat3<Scalar> A = Mat3<Scalar>::Identity();
  Vec3<Scalar> a = Vec3<Scalar>::Zero();

  SE3_() = default;
  SE3_(const Mat3<Scalar>& rot, const Vec3<Scalar>& trans) : A(rot), a(trans) {}

  static SE3_ identity() { return {}; }
  static SE3_ translation(const Vec3<Scalar>& t) { return {Mat3<Scalar>::Identity(), t}; }
  static SE3_ rotation(const Mat3<Scalar>& rot) { return {rot, Vec3<Scalar>::Zero()}; }

  /// A^T A = I and det A = 1 within tol.
  bool is_valid(double tol = 1e-10) const {
    return (A.transpose() * A - Mat3<Scalar>::Identity()).norm() <= tol &&
           std::abs(A.determinant() - Scalar(1)) <= tol && A.allFinite() && a.allFinite();
  }
};

using PhasePoint = PhasePoint_<double>;
using MomentumValue = MomentumValue_<double>;
using SE3 = SE3_<double>;

/// Rodrigues rotation about `axis` (normalized internally) by `angle`.
template <typename Derived>
Mat3<typename Derived::Scalar> rotation_about_axis(const Eigen::MatrixBase<Derived>& axis,
                                                   typename Derived::Scalar angle) {
  using Scalar = typename Derived::Scalar;
  const Scalar n = axis.norm();
  if (!(n >= Scalar(1e-12))) throw DomainError("rotation_about_axis: axis is (near) zero");
  const Vec3<Scalar> k = axis / n;
  const Mat3<Scalar> K = hat(k);
  return Mat3<Scalar>::Identity() + std::sin(angle) * K + (Scalar(1) - std::cos(angle)) * K * K;
}

template <typename Scalar>
SE3_<Scalar> compose(const SE3_<Scalar>& g, const SE3_<Scalar>& h) {
  return {g.A * h.A, g.a + g.A * h.a};
}

template <typename Scalar>
SE3_<Scalar> inverse(const SE3_<Scalar>& g) {
  const Mat3<Scalar> At = g.A.transpose();
  return {At, -(At * g.a)};
}

/// Cotangent-lifted diagonal action (Aq1 + a, Aq2 + a, Ap1, Ap2).
template <typename Scalar>
PhasePoint_<Scalar> act_phase(const SE3_<Scalar>& g, const PhasePoint_<Scalar>& m) {
  return {g.A * m.q1 + g.a, g.A * m.q2 + g.a, g.A * m.p1, g.A * m.p2};
}

/// Translation T_a(q, p) = (I, a)(q, p).
template <typename Scalar>
PhasePoint_<Scalar> translate(const Vec3<Scalar>& a, const PhasePoint_<Scalar>& m) {
  return {m.q1 + a, m.q2 + a, m.p1, m.p2};
}

/// Rotate all four components by R (no translation).
template <typename Scalar>
PhasePoint_<Scalar> rotate(const Mat3<Scalar>& R, const PhasePoint_<Scalar>& m) {
  return {R * m.q1, R * m.q2, R * m.p1, R * m.p2};
}

/// Ad*_{g^{-1}}(alpha, u) = (A alpha - (A u) x a, A u).
template <typename Scalar>
MomentumValue_<Scalar> coadjoint(const SE3_<Scalar>& g, const MomentumValue_<Scalar>& mu) {
  const Vec3<Scalar> Au = g.A * mu.u;
  return {g.A * mu.alpha - Au.cross(g.a), Au};
}

/// C_a(B, b) = (I, a)(B, b)(I, -a) = (B, b + a - B a).
template <typename Scalar>
SE3_<Scalar> conjugation(const Vec3<Scalar>& a, const SE3_<Scalar>& g) {
  return {g.A, g.a + a - g.A * a};
}

template <typename Scalar>
bool approx_equal(const SE3_<Scalar>& g, const SE3_<Scalar>& h, double tol = 1e-10) {
  return (g.A - h.A).norm() <= tol && approx_equal(g.a, h.a, tol);
}

template <typename Scalar>
bool approx_equal(const PhasePoint_<Scalar>& m, const PhasePoint_<Scalar>& n,
                  double rel = 1e-10, double abs_floor = 1e-12) {
  return approx_equal(m.vector(), n.vector(), rel, abs_floor);
}

}  // namespace optred
