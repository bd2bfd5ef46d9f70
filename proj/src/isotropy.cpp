#include "optred/isotropy.hpp"

#include <cmath>

#include "optred/errors.hpp"

namespace optred {

std::string to_string(FineClass c) { return "a" + std::to_string(static_cast<int>(c)); }

std::string to_string(IsotropyFamily f) {
  switch (f) {
    case IsotropyFamily::G1: return "G1";
    case IsotropyFamily::G2: return "G2";
    case IsotropyFamily::G3: return "G3";
    case IsotropyFamily::G4: return "G4";
  }
  return "?";
}

Vec3d canonical_direction(const Vec3d& y) {
  const double n = y.norm();
  if (!(n > 0.0) || !y.allFinite()) throw DomainError("canonical_direction: zero or non-finite axis");
  Vec3d d = y / n;
  const double m = d.cwiseAbs().maxCoeff();
  for (int i = 0; i < 3; ++i) {
    if (std::abs(d(i)) >= m - 1e-12) {
      if (d(i) < 0) d = -d;
      break;
    }
  }
  return d;
}

IsotropyClass canonicalize_g2(const Vec3d& y) {
  if (y.norm() == 0.0) throw DomainError("canonicalize: G2 needs y != 0");
  return {IsotropyFamily::G2, Vec3d::Zero(), canonical_direction(y)};
}

IsotropyClass canonicalize_g3(const Vec3d& x, const Vec3d& y) {
  if (y.norm() == 0.0) throw DomainError("canonicalize: G3 needs y != 0");
  if (is_parallel(x, y)) throw DomainError("canonicalize: G3 needs x x y != 0");
  const Vec3d d = canonical_direction(y);
  return {IsotropyFamily::G3, x - x.dot(d) * d, d};
}

IsotropyClass canonicalize(IsotropyFamily family, const Vec3d& x, const Vec3d& y) {
  switch (family) {
    case IsotropyFamily::G1: return IsotropyClass::g1(x);
    case IsotropyFamily::G2: return canonicalize_g2(y);
    case IsotropyFamily::G3: return canonicalize_g3(x, y);
    case IsotropyFamily::G4: return IsotropyClass::g4();
  }
  throw DomainError("canonicalize: unknown family");
}

IsotropyClass axis_class(const Vec3d& x, const Vec3d& y, double eps) {
  if (is_parallel(x, y, eps)) return canonicalize_g2(y);
  return canonicalize_g3(x, y);
}

bool same_class(const IsotropyClass& a, const IsotropyClass& b, double tol) {
  if (a.family != b.family) return false;
  switch (a.family) {
    case IsotropyFamily::G4: return true;
    case IsotropyFamily::G1: return approx_equal(a.x, b.x, tol, tol);
    case IsotropyFamily::G2: return a.ydir.cross(b.ydir).norm() <= tol;
    case IsotropyFamily::G3:
      return a.ydir.cross(b.ydir).norm() <= tol && approx_equal(a.x, b.x, tol, tol);
  }
  return false;
}

FineClass classify_fine(const PhasePoint& m, const Tolerance& tol) {
  const double s = m.scale();
  const Vec3d d = m.q1 - m.q2;
  const auto par = [&](const Vec3d& v, const Vec3d& w) { return is_parallel(v, w, tol.parallel); };
  const bool p1_zero = is_zero(m.p1, s, tol.zero);
  const bool p2_zero = is_zero(m.p2, s, tol.zero);

  if (p1_zero && p2_zero) {
    if (is_zero(d, s, tol.zero)) return FineClass::a1;
    if (par(m.q1, m.q2)) return FineClass::a2;
    return FineClass::a3;
  }
  if (p1_zero) {
    if (!par(d, m.p2)) return FineClass::a4;
    if (par(m.q1, m.p2) && par(m.q2, m.p2)) return FineClass::a6;
    return FineClass::a5;
  }
  if (p2_zero) {
    if (!par(d, m.p1)) return FineClass::a7;
    if (par(m.q1, m.p1) && par(m.q2, m.p1)) return FineClass::a9;
    return FineClass::a8;
  }
  if (!par(m.p1, m.p2)) return FineClass::a13;
  if (!par(d, m.p1)) return FineClass::a10;
  if (par(m.q1, m.p1) && par(m.q2, m.p1)) return FineClass::a12;
  return FineClass::a11;
}

IsotropyFamily family_of(FineClass c) {
  switch (c) {
    case FineClass::a1: return IsotropyFamily::G1;
    case FineClass::a2:
    case FineClass::a6:
    case FineClass::a9:
    case FineClass::a12: return IsotropyFamily::G2;
    case FineClass::a3:
    case FineClass::a5:
    case FineClass::a8:
    case FineClass::a11: return IsotropyFamily::G3;
    default: return IsotropyFamily::G4;
  }
}

namespace {

// Of q1, q2 pick the one farther from the axis direction y; in exact
// arithmetic both give the same G3 class.
IsotropyClass g3_from_points(const PhasePoint& m, const Vec3d& y) {
  const Vec3d d = y.normalized();
  const Vec3d r1 = m.q1 - m.q1.dot(d) * d;
  const Vec3d r2 = m.q2 - m.q2.dot(d) * d;
  return canonicalize_g3(r1.norm() >= r2.norm() ? m.q1 : m.q2, y);
}

}  // namespace

IsotropyClass isotropy_class(const PhasePoint& m, const Tolerance& tol) {
  switch (classify_fine(m, tol)) {
    case FineClass::a1: return IsotropyClass::g1(0.5 * (m.q1 + m.q2));
    case FineClass::a2: return canonicalize_g2(m.q1 - m.q2);
    case FineClass::a3: return canonicalize_g3(m.q1, m.q1 - m.q2);
    case FineClass::a5: return g3_from_points(m, m.p2);
    case FineClass::a6: return canonicalize_g2(m.p2);
    case FineClass::a8:
    case FineClass::a11: return g3_from_points(m, m.p1);
    case FineClass::a9:
    case FineClass::a12: return canonicalize_g2(m.p1);
    default: return IsotropyClass::g4();
  }
}

bool isotropy_contains(const IsotropyClass& cls, const SE3& g, double tol) {
  if (!g.is_valid(1e-9)) return false;
  const double s = std::max(1.0, cls.x.norm());
  const auto fixes_axis = [&] { return (g.A * cls.ydir - cls.ydir).norm() <= tol; };
  const auto fixes_point = [&] { return (g.a - (cls.x - g.A * cls.x)).norm() <= tol * s; };
  switch (cls.family) {
    case IsotropyFamily::G1: return fixes_point();
    case IsotropyFamily::G2: return fixes_axis() && g.a.norm() <= tol;
    case IsotropyFamily::G3: return fixes_axis() && fixes_point();
    case IsotropyFamily::G4:
      return (g.A - Mat3d::Identity()).norm() <= tol && g.a.norm() <= tol;
  }
  return false;
}

IsotropyClass conjugate_class(const SE3& g, const IsotropyClass& cls) {
  switch (cls.family) {
    case IsotropyFamily::G1: return IsotropyClass::g1(g.A * cls.x + g.a);
    case IsotropyFamily::G2:
    case IsotropyFamily::G3: return axis_class(g.A * cls.x + g.a, g.A * cls.ydir);
    case IsotropyFamily::G4: return cls;
  }
  return cls;
}

SE3 sample_isotropy_member(const IsotropyClass& cls, Rng& rng) {
  const double theta = uniform(rng, -M_PI, M_PI);
  switch (cls.family) {
    case IsotropyFamily::G1: {
      const Mat3d A = random_rotation(rng);
      return {A, cls.x - A * cls.x};
    }
    case IsotropyFamily::G2: return SE3::rotation(rotation_about_axis(cls.ydir, theta));
    case IsotropyFamily::G3: {
      const Mat3d A = rotation_about_axis(cls.ydir, theta);
      return {A, cls.x - A * cls.x};
    }
    case IsotropyFamily::G4: return SE3::identity();
  }
  return SE3::identity();
}

Eigen::MatrixXd isotropy_type_tangent(const PhasePoint& m, const Tolerance& tol) {
  const IsotropyClass cls = isotropy_class(m, tol);
  switch (cls.family) {
    case IsotropyFamily::G1: return Eigen::MatrixXd(12, 0);
    case IsotropyFamily::G4: return Eigen::MatrixXd::Identity(12, 12);
    default: break;
  }
  // (lambda y + x, beta y + x, gamma y, delta y): the four parameter directions.
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(12, 4);
  for (int k = 0; k < 4; ++k) basis.block<3, 1>(3 * k, k) = cls.ydir;
  return basis;
}

PhasePoint sample_stratum(FineClass c, Rng& rng) {
  const auto nz = [&] { return signed_uniform(rng, 0.3, 2.0); };
  const Vec3d y = random_unit(rng) * uniform(rng, 0.5, 2.0);
  const Vec3d x = random_orthogonal(rng, y);
  const Vec3d z = Vec3d::Zero();
  // Two distinct coefficients along an axis.
  const auto pair = [&] {
    const double l = nz();
    double b = nz();
    while (std::abs(b - l) < 0.2) b = nz();
    return std::pair{l, b};
  };
  switch (c) {
    case FineClass::a1: {
      const Vec3d q = random_vec3(rng);
      return {q, q, z, z};
    }
    case FineClass::a2: {
      const auto [l, b] = pair();
      return {l * y, b * y, z, z};
    }
    case FineClass::a3: {
      const auto [l, b] = pair();
      return {x + l * y, x + b * y, z, z};
    }
    case FineClass::a4: return {random_vec3(rng), random_vec3(rng), z, random_vec3(rng)};
    case FineClass::a5: return {x + nz() * y, x + nz() * y, z, nz() * y};
    case FineClass::a6: return {nz() * y, nz() * y, z, nz() * y};
    case FineClass::a7: return {random_vec3(rng), random_vec3(rng), random_vec3(rng), z};
    case FineClass::a8: return {x + nz() * y, x + nz() * y, nz() * y, z};
    case FineClass::a9: return {nz() * y, nz() * y, nz() * y, z};
    case FineClass::a10: {
      const Vec3d d = random_orthogonal(rng, y);
      const Vec3d q2 = random_vec3(rng);
      return {q2 + d + nz() * y, q2, nz() * y, nz() * y};
    }
    case FineClass::a11: return {x + nz() * y, x + nz() * y, nz() * y, nz() * y};
    case FineClass::a12: return {nz() * y, nz() * y, nz() * y, nz() * y};
    case FineClass::a13: {
      const Vec3d p1 = random_vec3(rng);
      return {random_vec3(rng), random_vec3(rng), p1, p1.cross(y) + nz() * y};
    }
  }
  return {};
}

}  // namespace optred
