#pragma once

// Projective-cylindrical coordinates on planes containing the u0 axis, used to
// parametrize the level sets with zero angular momentum and nonzero linear
// momentum. All formulas here are written in the frame where u0 = |u0| e3.

#include <Eigen/Dense>

#include "optred/euclid.hpp"

namespace optred {

/// beta_s = cos(s) e1 + sin(s) e2.
Vec3d beta(double s);

/// tau - n pi with n chosen so that the result lies in [0, pi).
double wrap_pi(double tau);

/// x = z beta_s + mu u0 with s in [0, pi) and signed z.
struct PlaneCoords {
  double z = 0.0;
  double s = 0.0;
  double mu = 0.0;
};

/// u0 must point along e3 (DomainError otherwise). A vertical x gives z = 0, s = 0.
PlaneCoords plane_decompose(const Vec3d& x, const Vec3d& u0);

/// f_s(z beta_0 + mu u0) = z beta_s + mu u0 for x in the plane Pi_0, s in [0, pi].
Vec3d f_s(const Vec3d& x, double s, const Vec3d& u0);

/// Rotation R with R u = |u| e3 (the identity when u already points along +e3).
Mat3d align_to_e3(const Vec3d& u);

/// Level-set coordinates (s, r_q1, r_q1q2, r_p, mu_q1, mu_q2, lambda) of a point
/// with momentum (0, u03 e3):
///   q1 = r_q1 beta_s + mu_q1 u0,   q2 = (r_q1 + r_q1q2) beta_s + mu_q2 u0,
///   p1 = r_p beta_s + lambda u0,   p2 = -r_p beta_s + (1 - lambda) u0.
struct Case7Coords {
  double s = 0.0;
  double r_q1 = 0.0;
  double r_q1q2 = 0.0;
  double r_p = 0.0;
  double mu_q1 = 0.0;
  double mu_q2 = 0.0;
  double lambda = 0.0;

  /// r_q1 + r_q1q2 (1 - lambda) + r_p (mu_q2 - mu_q1); zero on the level set.
  double constraint() const { return r_q1 + r_q1q2 * (1.0 - lambda) + r_p * (mu_q2 - mu_q1); }
};

/// Extract the coordinates of m, given in the e3 frame. One beta_s is shared by
/// all four vectors; its sign is fixed by the dominant horizontal vector.
Case7Coords case7_coordinates(const PhasePoint& m, double u03);

/// Build the point from coordinates (inverse of case7_coordinates up to the sign of beta).
PhasePoint case7_point(const Case7Coords& c, double u03);

enum class ChartId { Wp, Wq, Both };

const char* to_string(ChartId c);

/// Chart containing m, which must lie on J^{-1}(0, u0) with trivial isotropy
/// (u0 arbitrary; the frame rotation is applied internally). Throws DomainError otherwise.
ChartId chart_of(const PhasePoint& m, const Vec3d& u0);

}  // namespace optred
