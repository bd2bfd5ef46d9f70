#pragma once

// Test-side oracles written directly from the formulas, without going through
// the library code paths they check.

#include <Eigen/Dense>

#include <cmath>

#include "optred/euclid.hpp"
#include "optred/random.hpp"

namespace testing {

using optred::Mat3d;
using optred::PhasePoint;
using optred::Vec3d;

inline Mat3d rot_z(double t) {
  Mat3d R;
  R << std::cos(t), -std::sin(t), 0, std::sin(t), std::cos(t), 0, 0, 0, 1;
  return R;
}

inline double max_abs(const Eigen::MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

inline double dist(const PhasePoint& a, const PhasePoint& b) { return (a.vector() - b.vector()).norm(); }

/// Infinitesimal action of xi = (omega, v) at m: (w x q1 + v, w x q2 + v, w x p1, w x p2), as a 12x6 matrix.
inline Eigen::Matrix<double, 12, 6> generator_matrix(const PhasePoint& m) {
  Eigen::Matrix<double, 12, 6> G = Eigen::Matrix<double, 12, 6>::Zero();
  const Vec3d* pts[4] = {&m.q1, &m.q2, &m.p1, &m.p2};
  for (int k = 0; k < 4; ++k) {
    for (int i = 0; i < 3; ++i) {
      const Vec3d e = Vec3d::Unit(i);
      G.block<3, 1>(3 * k, i) = e.cross(*pts[k]);
      if (k < 2) G.block<3, 1>(3 * k, 3 + i) = e;
    }
  }
  return G;
}

/// Orthonormal basis of the isotropy algebra at m (null space of the generator matrix).
inline Eigen::MatrixXd isotropy_algebra(const PhasePoint& m, double rel = 1e-8) {
  const Eigen::Matrix<double, 12, 6> G = generator_matrix(m);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(G, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double ref = std::max(s(0), 1e-300);
  int rank = 0;
  for (int i = 0; i < 6; ++i) rank += s(i) > rel * ref;
  return svd.matrixV().rightCols(6 - rank);
}

/// Distance between the column spans of two orthonormal-ish bases of equal size.
inline double span_gap(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  if (A.cols() != B.cols()) return INFINITY;
  if (A.cols() == 0) return 0.0;
  const Eigen::MatrixXd QA = A.householderQr().householderQ() * Eigen::MatrixXd::Identity(A.rows(), A.cols());
  const Eigen::MatrixXd QB = B.householderQr().householderQ() * Eigen::MatrixXd::Identity(B.rows(), B.cols());
  return (QA * QA.transpose() - QB * QB.transpose()).norm();
}

/// The explicit double-angle section of the Case 7 level set with u0 = u03 e3.
inline PhasePoint case7_explicit(double nu, double r, double mu, double lam, double u03) {
  const double c2 = std::cos(2 * nu), s2 = std::sin(2 * nu), h = r / 2;
  return {Vec3d((lam - 1) * h + (lam - 1) * h * c2 - mu * h * s2, (lam - 1) * h * s2 - mu * h + mu * h * c2, 0.0),
          Vec3d(lam * h + lam * h * c2 - mu * h * s2, lam * h * s2 - mu * h + mu * h * c2, mu * u03),
          Vec3d(h * s2, h - h * c2, lam * u03), Vec3d(-h * s2, -h + h * c2, (1 - lam) * u03)};
}

/// Central-difference Jacobian of f : R^n -> R^k.
template <typename F>
Eigen::MatrixXd fd_jacobian(F f, const Eigen::VectorXd& x, double h = 1e-6) {
  const Eigen::VectorXd f0 = f(x);
  Eigen::MatrixXd J(f0.size(), x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Eigen::VectorXd a = x, b = x;
    a(i) += h;
    b(i) -= h;
    J.col(i) = (f(a) - f(b)) / (2 * h);
  }
  return J;
}

}  // namespace testing
