#pragma once

#include <Eigen/Dense>

namespace optred {

/// Numerical thresholds shared by the classifiers. Exact-arithmetic conditions
/// (v = 0, v || w) are decided against these.
struct Tolerance {
  /// v || w  iff  |v x w| <= parallel * |v| * |w|.
  double parallel = 1e-9;
  /// v = 0  iff  |v| <= zero * (largest component norm of the phase point).
  double zero = 1e-12;
  /// Singular values below rank * sigma_max count as zero.
  double rank = 1e-8;
};

inline const Tolerance kDefaultTolerance{};

/// Scale-invariant parallelism test; the zero vector is parallel to everything.
template <typename DA, typename DB>
bool is_parallel(const Eigen::MatrixBase<DA>& v, const Eigen::MatrixBase<DB>& w,
                 double eps = kDefaultTolerance.parallel) {
  return v.cross(w).norm() <= eps * v.norm() * w.norm();
}

template <typename D>
bool is_zero(const Eigen::MatrixBase<D>& v, double scale, double eps = kDefaultTolerance.zero) {
  return v.norm() <= eps * scale;
}

}  // namespace optred
