#pragma once

// Seeded sampling helpers. All samplers take the generator explicitly so that
// runs are reproducible from a single seed.

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <random>

#include "optred/euclid.hpp"

namespace optred {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Uniform magnitude in [lo, hi] with a random sign; never near zero when lo > 0.
inline double signed_uniform(Rng& rng, double lo, double hi) {
  const double v = uniform(rng, lo, hi);
  return std::bernoulli_distribution(0.5)(rng) ? v : -v;
}

inline Vec3d random_vec3(Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  return {n(rng), n(rng), n(rng)};
}

inline Vec3d random_unit(Rng& rng) {
  Vec3d v;
  do {
    v = random_vec3(rng);
  } while (v.norm() < 1e-3);
  return v.normalized();
}

/// Random vector orthogonal to `axis` with norm in [lo, hi].
inline Vec3d random_orthogonal(Rng& rng, const Vec3d& axis, double lo = 0.5, double hi = 2.0) {
  const Vec3d n = axis.normalized();
  Vec3d v;
  do {
    v = random_vec3(rng);
    v -= v.dot(n) * n;
  } while (v.norm() < 1e-3);
  return v.normalized() * uniform(rng, lo, hi);
}

/// Haar-distributed rotation from a normalized Gaussian quaternion.
inline Mat3d random_rotation(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  q.normalize();
  return q.toRotationMatrix();
}

inline SE3 random_se3(Rng& rng, double trans_scale = 1.0) {
  return {random_rotation(rng), random_vec3(rng, trans_scale)};
}

inline PhasePoint random_phase_point(Rng& rng, double scale = 1.0) {
  return {random_vec3(rng, scale), random_vec3(rng, scale), random_vec3(rng, scale),
          random_vec3(rng, scale)};
}

}  // namespace optred
