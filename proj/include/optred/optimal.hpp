#pragma once

// Values of the optimal momentum map of the two-body problem and everything
// attached to a single value rho: its level set (membership, parametrization),
// the group G_rho preserving it, and the quotient M_rho (projection, section).
//
// The ten cases, by momentum (alpha, u) and isotropy of the points:
//   1  (0, 0)                         G1(x0)
//   2  (0, 0)                         G2(y0)
//   3  (0, delta0 y0)                 G2(y0)
//   4  (0, 0)                         G3(x0, y0)
//   5  (delta0 x0 x y0, delta0 y0)    G3(x0, y0)
//   6  (alpha0, 0)                    trivial
//   7  (0, u0)                        trivial
//   8  (delta0 u0, u0)                trivial
//   9  alpha0 x u0 != 0, <alpha0, u0> = 0
//   10 alpha0 x u0 != 0, <alpha0, u0> != 0
// Cases 4, 5, 9, 10 are translates of 2, 3, 7, 8.

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "optred/euclid.hpp"
#include "optred/isotropy.hpp"
#include "optred/random.hpp"
#include "optred/tolerance.hpp"

namespace optred {

/// Static per-case data.
struct CaseInfo {
  int id;
  int level_set_dim;
  int reduced_dim;
  const char* group;
};

const CaseInfo& case_info(int case_id);

struct OptimalLabel {
  int case_id = 1;
  MomentumValue mu;
  IsotropyClass iso;

  // Cases 1-5: distinguished point x0 and axis y0. y0 keeps the scale the
  // label was built with, so the reduced coordinates (delta, gamma) refer to it.
  Vec3d x0 = Vec3d::Zero();
  Vec3d y0 = Vec3d::Zero();
  // Cases 3, 5: u = delta0 y0. Case 8: alpha = delta0 u0. Case 10: delta10.
  double delta0 = 0.0;
  // Cases 9, 10: a9 or a10, orthogonal to u0.
  Vec3d shift = Vec3d::Zero();
  // Cases 7-10: frame * u0 = |u0| e3.
  Mat3d frame = Mat3d::Identity();

  const Vec3d& u0() const { return mu.u; }
  double u03() const { return mu.u.norm(); }
};

OptimalLabel make_case1(const Vec3d& x0);
OptimalLabel make_case2(const Vec3d& y0);
OptimalLabel make_case3(double delta0, const Vec3d& y0);
OptimalLabel make_case4(const Vec3d& x0, const Vec3d& y0);
OptimalLabel make_case5(double delta0, const Vec3d& x0, const Vec3d& y0);
OptimalLabel make_case6(const Vec3d& alpha0);
OptimalLabel make_case7(const Vec3d& u0);
OptimalLabel make_case8(double delta0, const Vec3d& u0);
OptimalLabel make_case9(const Vec3d& alpha0, const Vec3d& u0);
OptimalLabel make_case10(const Vec3d& alpha0, const Vec3d& u0);

/// Magnitudes below which alpha and u count as zero (relative threshold 1e-9).
/// Zero scales mean exact tests.
struct LabelScales {
  double alpha = 0.0;
  double u = 0.0;
};

/// Label of the level set with momentum mu and isotropy iso. Aborts with
/// std::logic_error on a combination that no phase point realizes.
OptimalLabel label_from(const MomentumValue& mu, const IsotropyClass& iso, LabelScales scales = {});

OptimalLabel label(const PhasePoint& m, const Tolerance& tol = kDefaultTolerance);

/// Same level set: same case, momentum and isotropy class.
bool same_label(const OptimalLabel& a, const OptimalLabel& b, double tol = 1e-8);

/// Momentum tolerance: relative `rel` against |mu| with absolute floor `abs_floor`.
struct MatchTolerance {
  double rel = 1e-8;
  double abs_floor = 1e-10;
};

bool level_set_contains(const OptimalLabel& rho, const PhasePoint& m, MatchTolerance tol = {});

/// Coordinates on M_rho:
///   1: ()   2, 4: (r, phi)   3, 5: (delta, gamma)   6: (c, lambda)   7-10: (nu, r, mu, lambda)
struct ReducedPoint {
  int case_id = 1;
  Eigen::VectorXd x;

  static ReducedPoint point() { return {1, Eigen::VectorXd(0)}; }
  static ReducedPoint polar(int case_id, double r, double phi);
  static ReducedPoint axis(int case_id, double delta, double gamma);
  static ReducedPoint case6(double c, double lambda);
  static ReducedPoint generic(int case_id, double nu, double r, double mu, double lambda);
};

int reduced_dimension(int case_id);
std::vector<std::string> coordinate_names(int case_id);

/// Parameters of the level sets.
struct PointParam {};
/// Cases 2-5: (lambda y0 + x0, beta y0 + x0, gamma y0, (delta0 - gamma) y0).
struct AxisParam {
  double lambda = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};
/// Case 6: (q2 + v_p1 + lambda p1, q2, p1, -p1), p1 orthogonal to alpha0.
struct Case6Param {
  Vec3d q2 = Vec3d::Zero();
  Vec3d p1 = Vec3d::Zero();
  double lambda = 0.0;
};
/// Cases 7-10: r_q1q2 = r cos tau, r_p = r sin tau, r_q1 from the linear constraint.
struct Case7Param {
  double s = 0.0;
  double tau = 0.0;
  double r = 1.0;
  double mu_q1 = 0.0;
  double mu_q2 = 0.0;
  double lambda = 0.0;
};

using LevelSetParam = std::variant<PointParam, AxisParam, Case6Param, Case7Param>;

PhasePoint parametrize(const OptimalLabel& rho, const LevelSetParam& p);

/// Throws DomainError when m is not on the level set (tested with `tol`).
ReducedPoint project(const OptimalLabel& rho, const PhasePoint& m, MatchTolerance tol = {});

/// For Cases 2 and 4 this is section_plus composed with lift.
PhasePoint section(const OptimalLabel& rho, const ReducedPoint& pt);

/// Cases 2, 4: the global section (x+ y0 + x0, x0, y+ y0, -y+ y0) of the first stage.
PhasePoint section_plus(const OptimalLabel& rho, double xp, double yp);

/// Cases 2, 4: (x+, y+) = r (cos(phi/2), sin(phi/2)).
Eigen::Vector2d lift(const OptimalLabel& rho, const ReducedPoint& pt);

/// Cases 2, 4: (r+, phi+) -> (r+, 2 phi+ mod 2 pi).
ReducedPoint double_cover(const OptimalLabel& rho, double xp, double yp);

/// Label of the translated level set (I, a) J^{-1}(rho).
OptimalLabel transport(const Vec3d& a, const OptimalLabel& rho);

/// Case 8 chart map from W_p of the Case 7 level set with the same u0.
PhasePoint chart_map_F_p(const OptimalLabel& rho8, const PhasePoint& m7);
PhasePoint chart_map_F_p_inverse(const OptimalLabel& rho8, const PhasePoint& m8);

/// G_rho = {(A, a) : A axis = +-axis (sign only if flip), a - (center - A center) in T}
/// where T is R axis, or all of R^3 for Case 6, or {0} for Case 1.
struct GRhoDescriptor {
  int case_id = 1;
  Vec3d axis = Vec3d::Zero();
  Vec3d center = Vec3d::Zero();
  bool flip = false;
  bool any_translation = false;

  bool contains(const SE3& g, double tol = 1e-9) const;
  SE3 sample(Rng& rng) const;
  /// A rotation by pi about an axis orthogonal to `axis`, placed at center (Cases 2, 4).
  SE3 flip_element() const;
};

GRhoDescriptor g_rho(const OptimalLabel& rho);

/// Case ids whose level sets make up J^{-1}(mu), in the order 1, 2, 4 | 6 | 3, 7 | 8 | 9, 5 | 10.
std::vector<int> decompose_momentum_fiber(const MomentumValue& mu);

/// Element g of G_rho with g from = to, for the cases where G_rho acts freely
/// (3, 5, 6, 7, 8, 9, 10). Empty when no such g is found.
std::optional<SE3> solve_group_element(const OptimalLabel& rho, const PhasePoint& from,
                                       const PhasePoint& to, double tol = 1e-8);

/// Random label of the given case.
OptimalLabel sample_label(int case_id, Rng& rng);
/// Random admissible parameters for rho.
LevelSetParam sample_param(const OptimalLabel& rho, Rng& rng);
/// Random point of M_rho inside the section's domain.
ReducedPoint sample_reduced(const OptimalLabel& rho, Rng& rng);

inline PhasePoint sample_level_set(const OptimalLabel& rho, Rng& rng) {
  return parametrize(rho, sample_param(rho, rng));
}

}  // namespace optred
