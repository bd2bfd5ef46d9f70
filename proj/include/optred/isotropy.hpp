#pragma once

// Isotropy subgroups of the cotangent-lifted SE(3) action. Every phase point
// falls in exactly one of 13 fine classes; each fine class has isotropy in one
// of the families
//   G1(x)   = {(A, x - Ax)}                 rotations about the point x
//   G2(y)   = {(A, 0) : Ay = y}             rotations about the line R y
//   G3(x,y) = {(A, x - Ax) : Ay = y}        rotations about the line x + R y
//   G4      = {(I, 0)}

#include <Eigen/Dense>

#include <array>
#include <string>
#include <string_view>

#include "optred/euclid.hpp"
#include "optred/random.hpp"
#include "optred/tolerance.hpp"

namespace optred {

enum class FineClass { a1 = 1, a2, a3, a4, a5, a6, a7, a8, a9, a10, a11, a12, a13 };

inline constexpr std::array<FineClass, 13> kAllFineClasses = {
    FineClass::a1, FineClass::a2,  FineClass::a3,  FineClass::a4,  FineClass::a5,
    FineClass::a6, FineClass::a7,  FineClass::a8,  FineClass::a9,  FineClass::a10,
    FineClass::a11, FineClass::a12, FineClass::a13};

std::string to_string(FineClass c);

enum class IsotropyFamily { G1 = 1, G2, G3, G4 };

std::string to_string(IsotropyFamily f);

/// Canonical representative of an isotropy subgroup.
///  G1: x is the fixed point.
///  G2: ydir is a unit axis with canonical sign.
///  G3: ydir as for G2, x is the foot of the axis in the plane through 0 orthogonal to ydir.
struct IsotropyClass {
  IsotropyFamily family = IsotropyFamily::G4;
  Vec3d x = Vec3d::Zero();
  Vec3d ydir = Vec3d::Zero();

  static IsotropyClass g1(const Vec3d& point) { return {IsotropyFamily::G1, point, Vec3d::Zero()}; }
  static IsotropyClass g4() { return {}; }
};

/// Unit direction of y with the sign fixed so that the largest-magnitude
/// component (first one on ties) is positive. Throws DomainError for y = 0.
Vec3d canonical_direction(const Vec3d& y);

/// Canonical G2([y]).
IsotropyClass canonicalize_g2(const Vec3d& y);

/// Canonical G3([x, y]); x x y must be nonzero.
IsotropyClass canonicalize_g3(const Vec3d& x, const Vec3d& y);

/// Canonical class for family + raw parameters (x ignored for G2, both ignored for G4).
IsotropyClass canonicalize(IsotropyFamily family, const Vec3d& x = Vec3d::Zero(),
                           const Vec3d& y = Vec3d::Zero());

/// Class of the rotation axis {x + t y}: G2 if the axis passes through 0, else G3.
IsotropyClass axis_class(const Vec3d& x, const Vec3d& y, double eps = kDefaultTolerance.parallel);

/// Equality of canonical classes within tolerance (sign-insensitive on ydir).
bool same_class(const IsotropyClass& a, const IsotropyClass& b, double tol = 1e-8);

FineClass classify_fine(const PhasePoint& m, const Tolerance& tol = kDefaultTolerance);

IsotropyFamily family_of(FineClass c);

IsotropyClass isotropy_class(const PhasePoint& m, const Tolerance& tol = kDefaultTolerance);

/// Membership of g in the subgroup described by cls.
bool isotropy_contains(const IsotropyClass& cls, const SE3& g, double tol = 1e-9);

/// Class of g H g^{-1} where H is described by cls.
IsotropyClass conjugate_class(const SE3& g, const IsotropyClass& cls);

/// Random element of the subgroup described by cls.
SE3 sample_isotropy_member(const IsotropyClass& cls, Rng& rng);

/// Orthonormal basis (columns) of the tangent space at m of the isotropy-type
/// submanifold through m: 0 columns for G1, 4 for G2/G3, 12 for G4.
Eigen::MatrixXd isotropy_type_tangent(const PhasePoint& m, const Tolerance& tol = kDefaultTolerance);

/// Random point of the given fine class (strata have measure zero, so generic
/// sampling never reaches them).
PhasePoint sample_stratum(FineClass c, Rng& rng);

}  // namespace optred
