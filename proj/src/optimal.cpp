#include "optred/optimal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "optred/errors.hpp"
#include "optred/momentum.hpp"
#include "optred/projcyl.hpp"

namespace optred {

namespace {

constexpr double kRelZero = 1e-9;

const std::array<CaseInfo, 10> kCases = {{
    {1, 0, 0, "G1(x0)"},
    {2, 3, 2, "{(A, eta y0) : A y0 = +-y0}"},
    {3, 3, 2, "G2(y0) x| T_y0"},
    {4, 3, 2, "{(A, eta y0 + x0 - A x0) : A y0 = +-y0}"},
    {5, 3, 2, "G3(x0, y0) x| T_y0"},
    {6, 6, 2, "G2(alpha0) x| R^3"},
    {7, 6, 4, "G2(u0) x| T_u0"},
    {8, 6, 4, "G2(u0) x| T_u0"},
    {9, 6, 4, "C_a9(G2(u0) x| T_u0)"},
    {10, 6, 4, "C_a10(G2(u0) x| T_u0)"},
}};

void require_case(const OptimalLabel& rho, std::initializer_list<int> ids, const char* what) {
  for (int id : ids)
    if (rho.case_id == id) return;
  throw DomainError(std::string(what) + ": not defined for case " + std::to_string(rho.case_id));
}

bool near_zero(const Vec3d& v, double scale) { return v.norm() <= kRelZero * scale; }

// Fills the derived data of a label whose (case, mu, iso) are already exact.
OptimalLabel build(int case_id, const MomentumValue& mu, const IsotropyClass& iso) {
  OptimalLabel l;
  l.case_id = case_id;
  l.mu = mu;
  l.iso = iso;
  if (case_id >= 7) {
    l.frame = align_to_e3(mu.u);
    const double u2 = mu.u.squaredNorm();
    if (case_id == 8 || case_id == 10) l.delta0 = mu.alpha.dot(mu.u) / u2;
    if (case_id >= 9) l.shift = mu.u.cross(mu.alpha) / u2;
  }
  return l;
}

Vec3d case6_frame_vector(const Vec3d& alpha0) {
  const Vec3d n = alpha0.normalized();
  Vec3d f = Vec3d::UnitX() - n.x() * n;
  if (f.norm() < 1e-8) f = Vec3d::UnitY() - n.y() * n;
  return f.normalized();
}

// v with v x p1 = alpha0, v orthogonal to alpha0.
Vec3d case6_v(const Vec3d& p1, const Vec3d& alpha0) { return p1.cross(alpha0) / p1.squaredNorm(); }

PhasePoint from_frame(const OptimalLabel& rho, const PhasePoint& m) {
  return rotate<double>(rho.frame.transpose(), m);
}

PhasePoint section7_frame(double nu, double r, double mu, double lambda, double u03) {
  Case7Coords c;
  c.s = nu;
  c.r_q1q2 = r * std::cos(nu);
  c.r_p = r * std::sin(nu);
  c.mu_q1 = 0.0;
  c.mu_q2 = mu;
  c.lambda = lambda;
  c.r_q1 = -c.r_q1q2 * (1.0 - lambda) - c.r_p * mu;
  return case7_point(c, u03);
}

ReducedPoint project7(const OptimalLabel& rho, int case_id, const PhasePoint& m) {
  const Case7Coords c = case7_coordinates(rotate(rho.frame, m), rho.u03());
  const double r = std::hypot(c.r_p, c.r_q1q2);
  if (!(r > 0.0)) throw DomainError("project: r_p and r_q1q2 both vanish");
  const double nu = wrap_pi(std::atan2(c.r_p, c.r_q1q2));
  return ReducedPoint::generic(case_id, nu, r, c.mu_q2 - c.mu_q1, c.lambda);
}

void require_reduced(const OptimalLabel& rho, const ReducedPoint& pt) {
  if (pt.case_id != rho.case_id)
    throw DomainError("reduced point of case " + std::to_string(pt.case_id) + " used with case " +
                      std::to_string(rho.case_id));
  if (pt.x.size() != reduced_dimension(rho.case_id))
    throw DomainError("reduced point has the wrong dimension");
  if (!pt.x.allFinite()) throw DomainError("reduced point is not finite");
}

double frac_cot(double nu) {
  const double s = std::sin(nu);
  if (!(nu > 0.0 && nu < M_PI) || std::abs(s) < 1e-12)
    throw DomainError("Case 8/10 coordinates need nu in (0, pi)");
  return std::cos(nu) / s;
}

PhasePoint section8_frame(const OptimalLabel& rho, double nu, double r, double mu, double lambda) {
  const double cot = frac_cot(nu);
  const double u03 = rho.u03();
  PhasePoint m = section7_frame(nu, r, mu, lambda, u03);
  const Vec3d dir(1.0, -cot, 0.0);
  m.q1 += rho.delta0 * u03 * (1.0 - lambda) / r * dir;
  m.q2 += -rho.delta0 * u03 * lambda / r * dir;
  return m;
}

}  // namespace

const CaseInfo& case_info(int case_id) {
  if (case_id < 1 || case_id > 10) throw DomainError("case id must be in 1..10");
  return kCases[case_id - 1];
}

// ---------------------------------------------------------------- labels

OptimalLabel make_case1(const Vec3d& x0) {
  OptimalLabel l = build(1, {}, IsotropyClass::g1(x0));
  l.x0 = x0;
  return l;
}

OptimalLabel make_case2(const Vec3d& y0) {
  OptimalLabel l = build(2, {}, canonicalize_g2(y0));
  l.y0 = y0;
  return l;
}

OptimalLabel make_case3(double delta0, const Vec3d& y0) {
  if (delta0 == 0.0) throw DomainError("Case 3 needs delta0 != 0");
  OptimalLabel l = build(3, {Vec3d::Zero(), delta0 * y0}, canonicalize_g2(y0));
  l.y0 = y0;
  l.delta0 = delta0;
  return l;
}

OptimalLabel make_case4(const Vec3d& x0, const Vec3d& y0) {
  OptimalLabel l = build(4, {}, canonicalize_g3(x0, y0));
  l.x0 = x0;
  l.y0 = y0;
  return l;
}

OptimalLabel make_case5(double delta0, const Vec3d& x0, const Vec3d& y0) {
  if (delta0 == 0.0) throw DomainError("Case 5 needs delta0 != 0");
  OptimalLabel l = build(5, {delta0 * x0.cross(y0), delta0 * y0}, canonicalize_g3(x0, y0));
  l.x0 = x0;
  l.y0 = y0;
  l.delta0 = delta0;
  return l;
}

OptimalLabel make_case6(const Vec3d& alpha0) {
  if (!(alpha0.norm() > 0.0)) throw DomainError("Case 6 needs alpha0 != 0");
  return build(6, {alpha0, Vec3d::Zero()}, IsotropyClass::g4());
}

OptimalLabel make_case7(const Vec3d& u0) {
  if (!(u0.norm() > 0.0)) throw DomainError("Case 7 needs u0 != 0");
  return build(7, {Vec3d::Zero(), u0}, IsotropyClass::g4());
}

OptimalLabel make_case8(double delta0, const Vec3d& u0) {
  if (!(u0.norm() > 0.0)) throw DomainError("Case 8 needs u0 != 0");
  if (delta0 == 0.0) throw DomainError("Case 8 needs delta0 != 0");
  return build(8, {delta0 * u0, u0}, IsotropyClass::g4());
}

OptimalLabel make_case9(const Vec3d& alpha0, const Vec3d& u0) {
  if (!(u0.norm() > 0.0) || is_parallel(alpha0, u0))
    throw DomainError("Case 9 needs alpha0 x u0 != 0");
  if (std::abs(alpha0.dot(u0)) > kRelZero * alpha0.norm() * u0.norm())
    throw DomainError("Case 9 needs <alpha0, u0> = 0");
  return build(9, {alpha0, u0}, IsotropyClass::g4());
}

OptimalLabel make_case10(const Vec3d& alpha0, const Vec3d& u0) {
  if (!(u0.norm() > 0.0) || is_parallel(alpha0, u0))
    throw DomainError("Case 10 needs alpha0 x u0 != 0");
  if (std::abs(alpha0.dot(u0)) <= kRelZero * alpha0.norm() * u0.norm())
    throw DomainError("Case 10 needs <alpha0, u0> != 0");
  return build(10, {alpha0, u0}, IsotropyClass::g4());
}

OptimalLabel label_from(const MomentumValue& mu, const IsotropyClass& iso, LabelScales scales) {
  const bool u_zero = near_zero(mu.u, scales.u);
  const bool a_zero = near_zero(mu.alpha, scales.alpha);
  const Vec3d& y = iso.ydir;
  const auto unrealizable = [] {
    throw std::logic_error("label: no phase point has this momentum and isotropy");
  };
  const bool u_on_axis = u_zero || is_parallel(mu.u, y, kRelZero);
  switch (iso.family) {
    case IsotropyFamily::G1:
      if (!u_zero || !a_zero) unrealizable();
      return make_case1(iso.x);
    case IsotropyFamily::G2:
      if (!a_zero || !u_on_axis) unrealizable();
      if (u_zero) return make_case2(y);
      return make_case3(mu.u.dot(y), y);
    case IsotropyFamily::G3: {
      // alpha = x x u on the whole G3 stratum
      const double scale = std::max({scales.alpha, mu.alpha.norm(), iso.x.norm() * mu.u.norm()});
      if (!u_on_axis || (mu.alpha - iso.x.cross(mu.u)).norm() > kRelZero * scale) unrealizable();
    }
      if (u_zero) return make_case4(iso.x, y);
      return make_case5(mu.u.dot(y), iso.x, y);
    case IsotropyFamily::G4: break;
  }
  if (u_zero) {
    if (a_zero) throw std::logic_error("label: trivial isotropy with zero momentum does not occur");
    return build(6, {mu.alpha, Vec3d::Zero()}, iso);
  }
  if (a_zero) return build(7, {Vec3d::Zero(), mu.u}, iso);
  const double u2 = mu.u.squaredNorm();
  const double along = mu.alpha.dot(mu.u) / u2;
  if (is_parallel(mu.alpha, mu.u)) return build(8, {along * mu.u, mu.u}, iso);
  if (std::abs(mu.alpha.dot(mu.u)) <= kRelZero * mu.alpha.norm() * mu.u.norm())
    return build(9, {mu.alpha - along * mu.u, mu.u}, iso);
  return build(10, mu, iso);
}

OptimalLabel label(const PhasePoint& m, const Tolerance& tol) {
  const LabelScales scales{angular_scale(m), m.p1.norm() + m.p2.norm()};
  return label_from(momentum_map(m), isotropy_class(m, tol), scales);
}

bool same_label(const OptimalLabel& a, const OptimalLabel& b, double tol) {
  return a.case_id == b.case_id && approx_equal(a.mu.vector(), b.mu.vector(), tol, tol) &&
         same_class(a.iso, b.iso, tol);
}

bool level_set_contains(const OptimalLabel& rho, const PhasePoint& m, MatchTolerance tol) {
  if (!m.all_finite()) return false;
  const Eigen::Matrix<double, 6, 1> d = momentum_map(m).vector() - rho.mu.vector();
  if (d.norm() > std::max(tol.rel * rho.mu.vector().norm(), tol.abs_floor)) return false;
  return same_class(isotropy_class(m), rho.iso, 1e-8);
}

// ---------------------------------------------------------------- reduced points

ReducedPoint ReducedPoint::polar(int case_id, double r, double phi) {
  return {case_id, Eigen::Vector2d(r, phi)};
}

ReducedPoint ReducedPoint::axis(int case_id, double delta, double gamma) {
  return {case_id, Eigen::Vector2d(delta, gamma)};
}

ReducedPoint ReducedPoint::case6(double c, double lambda) { return {6, Eigen::Vector2d(c, lambda)}; }

ReducedPoint ReducedPoint::generic(int case_id, double nu, double r, double mu, double lambda) {
  return {case_id, Eigen::Vector4d(nu, r, mu, lambda)};
}

int reduced_dimension(int case_id) { return case_info(case_id).reduced_dim; }

std::vector<std::string> coordinate_names(int case_id) {
  switch (case_id) {
    case 1: return {};
    case 2:
    case 4: return {"r", "phi"};
    case 3:
    case 5: return {"delta", "gamma"};
    case 6: return {"c", "lambda"};
    default: break;
  }
  case_info(case_id);
  return {"nu", "r", "mu", "lambda"};
}

// ---------------------------------------------------------------- level sets

PhasePoint parametrize(const OptimalLabel& rho, const LevelSetParam& p) {
  const int k = rho.case_id;
  if (k == 1) {
    if (!std::holds_alternative<PointParam>(p)) throw DomainError("Case 1 takes no parameters");
    return {rho.x0, rho.x0, Vec3d::Zero(), Vec3d::Zero()};
  }
  if (k <= 5) {
    const auto* a = std::get_if<AxisParam>(&p);
    if (!a) throw DomainError("Cases 2-5 take (lambda, beta, gamma)");
    if ((k == 2 || k == 4) && a->gamma == 0.0 && a->lambda == a->beta)
      throw DomainError("Cases 2/4 need gamma != 0 or lambda != beta");
    const Vec3d x0 = (k >= 4) ? rho.x0 : Vec3d::Zero();
    const double d0 = (k == 3 || k == 5) ? rho.delta0 : 0.0;
    return {a->lambda * rho.y0 + x0, a->beta * rho.y0 + x0, a->gamma * rho.y0,
            (d0 - a->gamma) * rho.y0};
  }
  if (k == 6) {
    const auto* a = std::get_if<Case6Param>(&p);
    if (!a) throw DomainError("Case 6 takes (q2, p1, lambda)");
    const Vec3d& alpha0 = rho.mu.alpha;
    if (!(a->p1.norm() > 0.0)) throw DomainError("Case 6 needs p1 != 0");
    if (std::abs(a->p1.dot(alpha0)) > 1e-10 * a->p1.norm() * alpha0.norm())
      throw DomainError("Case 6 needs p1 orthogonal to alpha0");
    return {a->q2 + case6_v(a->p1, alpha0) + a->lambda * a->p1, a->q2, a->p1, -a->p1};
  }

  const auto* a = std::get_if<Case7Param>(&p);
  if (!a) throw DomainError("Cases 7-10 take (s, tau, r, mu_q1, mu_q2, lambda)");
  if (!(a->r > 0.0)) throw DomainError("Cases 7-10 need r > 0");
  if (!(a->s >= 0.0 && a->s < M_PI)) throw DomainError("Cases 7-10 need s in [0, pi)");
  if (!(a->tau >= 0.0 && a->tau < 2.0 * M_PI)) throw DomainError("Cases 7-10 need tau in [0, 2 pi)");
  if ((k == 8 || k == 10) && std::abs(std::sin(a->tau)) < 1e-12)
    throw DomainError("Cases 8/10 need r_p != 0 (tau not 0 or pi)");
  Case7Coords c;
  c.s = a->s;
  c.r_q1q2 = a->r * std::cos(a->tau);
  c.r_p = a->r * std::sin(a->tau);
  c.mu_q1 = a->mu_q1;
  c.mu_q2 = a->mu_q2;
  c.lambda = a->lambda;
  c.r_q1 = -c.r_q1q2 * (1.0 - c.lambda) - c.r_p * (c.mu_q2 - c.mu_q1);
  PhasePoint m = from_frame(rho, case7_point(c, rho.u03()));
  if (k == 8 || k == 10) m = chart_map_F_p(rho, m);
  if (k >= 9) m = translate(rho.shift, m);
  return m;
}

PhasePoint chart_map_F_p(const OptimalLabel& rho8, const PhasePoint& m7) {
  require_case(rho8, {8, 10}, "chart_map_F_p");
  const Vec3d& u0 = rho8.mu.u;
  if ((m7.p1 + m7.p2 - u0).norm() > 1e-8 * u0.norm())
    throw DomainError("chart_map_F_p: linear momentum does not match u0");
  const Vec3d N = m7.p1.cross(m7.p2);
  if (N.norm() <= 1e-12 * m7.p1.norm() * m7.p2.norm() || N.norm() == 0.0)
    throw DomainError("chart_map_F_p: r_p = 0 (point outside W_p)");
  const double rp2 = N.squaredNorm() / u0.squaredNorm();
  const double lambda = m7.p1.dot(u0) / u0.squaredNorm();
  const double t1 = rho8.delta0 * (1.0 - lambda) / rp2;
  const double t2 = -rho8.delta0 * lambda / rp2;
  const double n2 = N.squaredNorm();
  const Vec3d q1n = m7.q1 - (m7.q1.dot(N) / n2) * N;
  const Vec3d q2n = m7.q2 - (m7.q2.dot(N) / n2) * N;
  return {q1n + t1 * N, q2n + t2 * N, m7.p1, m7.p2};
}

PhasePoint chart_map_F_p_inverse(const OptimalLabel& rho8, const PhasePoint& m8) {
  require_case(rho8, {8, 10}, "chart_map_F_p_inverse");
  const Vec3d N = m8.p1.cross(m8.p2);
  if (N.norm() == 0.0) throw DomainError("chart_map_F_p_inverse: p1 x p2 = 0");
  const double n2 = N.squaredNorm();
  return {m8.q1 - (m8.q1.dot(N) / n2) * N, m8.q2 - (m8.q2.dot(N) / n2) * N, m8.p1, m8.p2};
}

ReducedPoint project(const OptimalLabel& rho, const PhasePoint& m, MatchTolerance tol) {
  if (!level_set_contains(rho, m, tol))
    throw DomainError("project: point is not on the level set of case " +
                      std::to_string(rho.case_id));
  const int k = rho.case_id;
  switch (k) {
    case 1: return ReducedPoint::point();
    case 2:
    case 3:
    case 4:
    case 5: {
      const double y2 = rho.y0.squaredNorm();
      const double delta = (m.q1 - m.q2).dot(rho.y0) / y2;
      const double gamma = m.p1.dot(rho.y0) / y2;
      if (k == 2 || k == 4) return double_cover(rho, delta, gamma);
      return ReducedPoint::axis(k, delta, gamma);
    }
    case 6: {
      const double c = m.p1.norm();
      return ReducedPoint::case6(c, (m.q1 - m.q2).dot(m.p1) / (c * c));
    }
    case 7: return project7(rho, 7, m);
    case 8: return project7(rho, 8, chart_map_F_p_inverse(rho, m));
    case 9: return project7(rho, 9, translate(Vec3d(-rho.shift), m));
    case 10: return project7(rho, 10, chart_map_F_p_inverse(rho, translate(Vec3d(-rho.shift), m)));
    default: break;
  }
  throw std::logic_error("project: bad case id");
}

PhasePoint section_plus(const OptimalLabel& rho, double xp, double yp) {
  require_case(rho, {2, 4}, "section_plus");
  if (xp == 0.0 && yp == 0.0) throw DomainError("section_plus: (x+, y+) must be nonzero");
  const Vec3d x0 = rho.case_id == 4 ? rho.x0 : Vec3d::Zero();
  return {xp * rho.y0 + x0, x0, yp * rho.y0, -yp * rho.y0};
}

Eigen::Vector2d lift(const OptimalLabel& rho, const ReducedPoint& pt) {
  require_case(rho, {2, 4}, "lift");
  require_reduced(rho, pt);
  const double r = pt.x(0), phi = pt.x(1);
  if (!(r > 0.0)) throw DomainError("Cases 2/4 need r > 0");
  return {r * std::cos(0.5 * phi), r * std::sin(0.5 * phi)};
}

ReducedPoint double_cover(const OptimalLabel& rho, double xp, double yp) {
  require_case(rho, {2, 4}, "double_cover");
  if (xp == 0.0 && yp == 0.0) throw DomainError("double_cover: (x+, y+) must be nonzero");
  double phi = std::fmod(2.0 * std::atan2(yp, xp), 2.0 * M_PI);
  if (phi < 0.0) phi += 2.0 * M_PI;
  if (phi >= 2.0 * M_PI) phi = 0.0;
  return ReducedPoint::polar(rho.case_id, std::hypot(xp, yp), phi);
}

PhasePoint section(const OptimalLabel& rho, const ReducedPoint& pt) {
  require_reduced(rho, pt);
  const int k = rho.case_id;
  const auto& x = pt.x;
  switch (k) {
    case 1: return {rho.x0, rho.x0, Vec3d::Zero(), Vec3d::Zero()};
    case 2:
    case 4: {
      const Eigen::Vector2d p = lift(rho, pt);
      return section_plus(rho, p(0), p(1));
    }
    case 3:
    case 5: {
      const Vec3d x0 = k == 5 ? rho.x0 : Vec3d::Zero();
      return {x(0) * rho.y0 + x0, x0, x(1) * rho.y0, (rho.delta0 - x(1)) * rho.y0};
    }
    case 6: {
      const double c = x(0), lambda = x(1);
      if (!(c > 0.0)) throw DomainError("Case 6 needs c > 0");
      const Vec3d p1 = c * case6_frame_vector(rho.mu.alpha);
      return {case6_v(p1, rho.mu.alpha) + lambda * p1, Vec3d::Zero(), p1, -p1};
    }
    default: break;
  }
  const double nu = x(0), r = x(1), mu = x(2), lambda = x(3);
  if (!(r > 0.0)) throw DomainError("Cases 7-10 need r > 0");
  PhasePoint m = (k == 7 || k == 9) ? section7_frame(nu, r, mu, lambda, rho.u03())
                                    : section8_frame(rho, nu, r, mu, lambda);
  m = from_frame(rho, m);
  if (k >= 9) m = translate(rho.shift, m);
  return m;
}

// ---------------------------------------------------------------- group data

OptimalLabel transport(const Vec3d& a, const OptimalLabel& rho) {
  const SE3 g = SE3::translation(a);
  const MomentumValue mu = coadjoint(g, rho.mu);
  const IsotropyClass iso = conjugate_class(g, rho.iso);
  OptimalLabel out =
      label_from(mu, iso, {rho.mu.alpha.norm() + rho.mu.u.norm() * a.norm(), 0.0});
  if (out.case_id >= 2 && out.case_id <= 5 && rho.case_id >= 2 && rho.case_id <= 5) {
    // keep the caller's axis scale so reduced coordinates are comparable
    out.y0 = rho.y0;
    out.x0 = iso.family == IsotropyFamily::G3 ? Vec3d(rho.x0 + a) : Vec3d::Zero();
    if (out.case_id == 3 || out.case_id == 5) out.delta0 = mu.u.dot(rho.y0) / rho.y0.squaredNorm();
  }
  return out;
}

GRhoDescriptor g_rho(const OptimalLabel& rho) {
  GRhoDescriptor d;
  d.case_id = rho.case_id;
  switch (rho.case_id) {
    case 1: d.center = rho.x0; break;
    case 2:
    case 3:
    case 4:
    case 5:
      d.axis = rho.iso.ydir;
      d.center = rho.case_id >= 4 ? rho.x0 : Vec3d::Zero();
      d.flip = rho.case_id == 2 || rho.case_id == 4;
      break;
    case 6:
      d.axis = rho.mu.alpha.normalized();
      d.any_translation = true;
      break;
    default:
      d.axis = rho.mu.u.normalized();
      d.center = rho.shift;
      break;
  }
  return d;
}

bool GRhoDescriptor::contains(const SE3& g, double tol) const {
  if (!g.is_valid(1e-9)) return false;
  const double s = std::max(1.0, center.norm());
  const Vec3d b = g.a - (center - g.A * center);
  if (case_id == 1) return b.norm() <= tol * s;
  const bool fixes = (g.A * axis - axis).norm() <= tol;
  const bool flips = flip && (g.A * axis + axis).norm() <= tol;
  if (!fixes && !flips) return false;
  if (any_translation) return true;
  return b.cross(axis).norm() <= tol * s;
}

SE3 GRhoDescriptor::flip_element() const {
  if (!flip) throw DomainError("flip_element: G_rho has no flip for this case");
  Vec3d perp = axis.cross(Vec3d::UnitX());
  if (perp.norm() < 0.5) perp = axis.cross(Vec3d::UnitY());
  const Mat3d B = rotation_about_axis(perp, M_PI);
  return {B, center - B * center};
}

SE3 GRhoDescriptor::sample(Rng& rng) const {
  if (case_id == 1) {
    const Mat3d A = random_rotation(rng);
    return {A, center - A * center};
  }
  Mat3d A = rotation_about_axis(axis, uniform(rng, -M_PI, M_PI));
  if (flip && std::bernoulli_distribution(0.5)(rng)) A = A * flip_element().A;
  const Vec3d t = any_translation ? random_vec3(rng) : Vec3d(uniform(rng, -2.0, 2.0) * axis);
  return {A, t + center - A * center};
}

std::vector<int> decompose_momentum_fiber(const MomentumValue& mu) {
  const double scale = mu.vector().norm();
  const bool u_zero = mu.u.norm() <= 1e-12 * scale;
  const bool a_zero = mu.alpha.norm() <= 1e-12 * scale;
  if (u_zero && a_zero) return {1, 2, 4};
  if (u_zero) return {6};
  if (a_zero) return {3, 7};
  if (is_parallel(mu.alpha, mu.u)) return {8};
  if (std::abs(mu.alpha.dot(mu.u)) <= kRelZero * mu.alpha.norm() * mu.u.norm()) return {9, 5};
  return {10};
}

std::optional<SE3> solve_group_element(const OptimalLabel& rho, const PhasePoint& from,
                                       const PhasePoint& to, double tol) {
  const auto angle_about = [](const Vec3d& n, const Vec3d& v, const Vec3d& w) {
    return std::atan2(n.dot(v.cross(w)), v.dot(w));
  };
  const auto horiz = [](const Vec3d& n, const Vec3d& v) { return Vec3d(v - v.dot(n) * n); };
  SE3 g;
  switch (rho.case_id) {
    case 3:
    case 5: g = SE3::translation(to.q1 - from.q1); break;
    case 6: {
      const Vec3d n = rho.mu.alpha.normalized();
      g.A = rotation_about_axis(n, angle_about(n, horiz(n, from.p1), horiz(n, to.p1)));
      g.a = to.q2 - g.A * from.q2;
      break;
    }
    case 7:
    case 8:
    case 9:
    case 10: {
      const Vec3d n = rho.mu.u.normalized();
      const Vec3d pf = horiz(n, from.p1), df = horiz(n, from.q2 - from.q1);
      const bool use_p = pf.norm() >= df.norm();
      const Vec3d vf = use_p ? pf : df;
      const Vec3d vt = use_p ? horiz(n, to.p1) : horiz(n, to.q2 - to.q1);
      g.A = rotation_about_axis(n, angle_about(n, vf, vt));
      g.a = to.q1 - g.A * from.q1;
      break;
    }
    default: return std::nullopt;
  }
  const double scale = std::max(1.0, to.scale());
  if (!approx_equal(act_phase(g, from), to, tol, tol * scale)) return std::nullopt;
  if (!g_rho(rho).contains(g, 1e-7)) return std::nullopt;
  return g;
}

// ---------------------------------------------------------------- sampling

OptimalLabel sample_label(int case_id, Rng& rng) {
  const auto axis = [&] { return Vec3d(random_unit(rng) * uniform(rng, 0.5, 2.0)); };
  const auto nz = [&] { return signed_uniform(rng, 0.5, 2.0); };
  switch (case_id) {
    case 1: return make_case1(random_vec3(rng));
    case 2: return make_case2(axis());
    case 3: return make_case3(nz(), axis());
    case 4: {
      const Vec3d y = axis();
      return make_case4(random_orthogonal(rng, y) + uniform(rng, -1.0, 1.0) * y, y);
    }
    case 5: {
      const Vec3d y = axis();
      return make_case5(nz(), random_orthogonal(rng, y) + uniform(rng, -1.0, 1.0) * y, y);
    }
    case 6: return make_case6(axis());
    case 7: return make_case7(axis());
    case 8: return make_case8(nz(), axis());
    case 9: {
      const Vec3d u = axis();
      return make_case9(random_orthogonal(rng, u), u);
    }
    case 10: {
      const Vec3d u = axis();
      return make_case10(random_orthogonal(rng, u) + nz() * u.normalized(), u);
    }
    default: break;
  }
  throw DomainError("sample_label: case id must be in 1..10");
}

LevelSetParam sample_param(const OptimalLabel& rho, Rng& rng) {
  const int k = rho.case_id;
  if (k == 1) return PointParam{};
  if (k <= 5) {
    AxisParam a{uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0)};
    if (k == 2 || k == 4) {
      if (std::bernoulli_distribution(0.2)(rng)) {
        a.gamma = 0.0;
        a.beta = a.lambda - signed_uniform(rng, 0.5, 2.0);
      } else {
        a.gamma = signed_uniform(rng, 0.3, 2.0);
      }
    }
    return a;
  }
  if (k == 6) {
    return Case6Param{random_vec3(rng), random_orthogonal(rng, rho.mu.alpha),
                      uniform(rng, -2.0, 2.0)};
  }
  Case7Param p;
  p.s = uniform(rng, 0.0, M_PI);
  p.tau = uniform(rng, 0.0, 2.0 * M_PI);
  if (k == 8 || k == 10)
    p.tau = uniform(rng, 0.2, M_PI - 0.2) + (std::bernoulli_distribution(0.5)(rng) ? M_PI : 0.0);
  p.r = uniform(rng, 0.5, 2.0);
  p.mu_q1 = uniform(rng, -2.0, 2.0);
  p.mu_q2 = uniform(rng, -2.0, 2.0);
  p.lambda = uniform(rng, -2.0, 2.0);
  return p;
}

ReducedPoint sample_reduced(const OptimalLabel& rho, Rng& rng) {
  const int k = rho.case_id;
  switch (k) {
    case 1: return ReducedPoint::point();
    case 2:
    case 4: return ReducedPoint::polar(k, uniform(rng, 0.5, 2.0), uniform(rng, 0.0, 2.0 * M_PI));
    case 3:
    case 5: return ReducedPoint::axis(k, uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0));
    case 6: return ReducedPoint::case6(uniform(rng, 0.5, 2.0), uniform(rng, -2.0, 2.0));
    default: break;
  }
  const double nu = (k == 8 || k == 10) ? uniform(rng, 0.2, M_PI - 0.2) : uniform(rng, 0.0, M_PI);
  return ReducedPoint::generic(k, nu, uniform(rng, 0.5, 2.0), uniform(rng, -2.0, 2.0),
                               uniform(rng, -2.0, 2.0));
}

}  // namespace optred
