#include "optred/projcyl.hpp"

#include <cmath>

#include "optred/errors.hpp"
#include "optred/isotropy.hpp"
#include "optred/momentum.hpp"

namespace optred {

Vec3d beta(double s) { return {std::cos(s), std::sin(s), 0.0}; }

double wrap_pi(double tau) {
  if (!std::isfinite(tau)) throw DomainError("wrap_pi: non-finite angle");
  double w = tau - std::floor(tau / M_PI) * M_PI;
  // floor can land exactly on pi after rounding
  if (w >= M_PI) w -= M_PI;
  if (w < 0.0) w = 0.0;
  return w;
}

namespace {

void require_vertical(const Vec3d& u0) {
  if (u0.norm() == 0.0 || u0.head<2>().norm() > 1e-12 * u0.norm())
    throw DomainError("projective-cylindrical coordinates need u0 along e3");
}

}  // namespace

PlaneCoords plane_decompose(const Vec3d& x, const Vec3d& u0) {
  require_vertical(u0);
  PlaneCoords c;
  c.mu = x.dot(u0) / u0.squaredNorm();
  const Vec3d h = x - c.mu * u0;
  if (h.norm() <= 1e-15 * std::max(1.0, x.norm())) return c;
  c.s = wrap_pi(std::atan2(h.y(), h.x()));
  c.z = h.dot(beta(c.s));
  return c;
}

Vec3d f_s(const Vec3d& x, double s, const Vec3d& u0) {
  require_vertical(u0);
  if (s < 0.0 || s > M_PI) throw DomainError("f_s: s outside [0, pi]");
  if (std::abs(x.y()) > 1e-12 * std::max(1.0, x.norm()))
    throw DomainError("f_s: x is not in the plane Pi_0");
  const double mu = x.dot(u0) / u0.squaredNorm();
  return x.x() * beta(s) + mu * u0;
}

Mat3d align_to_e3(const Vec3d& u) {
  if (!(u.norm() > 0.0)) throw DomainError("align_to_e3: zero vector");
  // FromTwoVectors loses accuracy for nearly opposite vectors, so flip the
  // lower hemisphere onto the upper one first with a half turn about e1.
  const Mat3d flip = u.z() < 0.0 ? Vec3d(1.0, -1.0, -1.0).asDiagonal().toDenseMatrix() : Mat3d::Identity();
  Eigen::Quaterniond q = Eigen::Quaterniond::FromTwoVectors(flip * u, Vec3d::UnitZ());
  q.normalize();
  return q.toRotationMatrix() * flip;
}

Case7Coords case7_coordinates(const PhasePoint& m, double u03) {
  if (!(u03 > 0.0)) throw DomainError("case7_coordinates: u03 must be positive");
  const auto horiz = [](const Vec3d& v) { return Vec3d(v.x(), v.y(), 0.0); };
  const Vec3d hp = horiz(m.p1);
  const Vec3d hd = horiz(m.q2 - m.q1);
  const Vec3d& lead = hp.norm() >= hd.norm() ? hp : hd;

  Case7Coords c;
  if (lead.norm() > 0.0) {
    c.s = wrap_pi(std::atan2(lead.y(), lead.x()));
  }
  const Vec3d b = beta(c.s);
  c.r_p = hp.dot(b);
  c.r_q1q2 = hd.dot(b);
  c.r_q1 = horiz(m.q1).dot(b);
  c.mu_q1 = m.q1.z() / u03;
  c.mu_q2 = m.q2.z() / u03;
  c.lambda = m.p1.z() / u03;
  return c;
}

PhasePoint case7_point(const Case7Coords& c, double u03) {
  const Vec3d b = beta(c.s);
  const Vec3d u0(0.0, 0.0, u03);
  return {c.r_q1 * b + c.mu_q1 * u0, (c.r_q1 + c.r_q1q2) * b + c.mu_q2 * u0,
          c.r_p * b + c.lambda * u0, -c.r_p * b + (1.0 - c.lambda) * u0};
}

const char* to_string(ChartId c) {
  switch (c) {
    case ChartId::Wp: return "Wp";
    case ChartId::Wq: return "Wq";
    case ChartId::Both: return "Both";
  }
  return "?";
}

ChartId chart_of(const PhasePoint& m, const Vec3d& u0) {
  if (!(u0.norm() > 0.0)) throw DomainError("chart_of: u0 must be nonzero");
  const MomentumValue J = momentum_map(m);
  if ((J.u - u0).norm() > 1e-8 * u0.norm() || J.alpha.norm() > 1e-8 * std::max(1.0, angular_scale(m)))
    throw DomainError("chart_of: point is not on J^{-1}(0, u0)");
  if (family_of(classify_fine(m)) != IsotropyFamily::G4)
    throw DomainError("chart_of: point has nontrivial isotropy");

  const Mat3d R = align_to_e3(u0);
  const Case7Coords c = case7_coordinates(rotate(R, m), u0.norm());
  const double r = std::hypot(c.r_p, c.r_q1q2);
  const bool p_zero = std::abs(c.r_p) <= 1e-12 * r;
  const bool q_zero = std::abs(c.r_q1q2) <= 1e-12 * r;
  if (p_zero) return ChartId::Wq;
  if (q_zero) return ChartId::Wp;
  return ChartId::Both;
}

}  // namespace optred
