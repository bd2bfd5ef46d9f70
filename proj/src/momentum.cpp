#include "optred/momentum.hpp"

#include "optred/errors.hpp"
#include "optred/isotropy.hpp"

namespace optred {

bool is_regular(const PhasePoint& m, const Tolerance& tol) {
  // The kernel of (T_mJ)^T is nontrivial iff p1, p2 and q1 - q2 share one line.
  const Vec3d d = m.q1 - m.q2;
  const Vec3d* lead = &m.p1;
  for (const Vec3d* v : {&m.p2, &d})
    if (v->norm() > lead->norm()) lead = v;
  if (is_zero(*lead, m.scale(), tol.zero)) return false;
  return !(is_parallel(*lead, m.p1, tol.parallel) && is_parallel(*lead, m.p2, tol.parallel) &&
           is_parallel(*lead, d, tol.parallel));
}

int char_distribution_dim(const PhasePoint& m, const Tolerance& tol) {
  Tolerance loose = tol;
  loose.parallel *= 1e3;
  loose.zero *= 1e3;
  if (!same_class(isotropy_class(m, tol), isotropy_class(m, loose), 1e-6))
    throw NumericalError("char_distribution_dim: isotropy type is ambiguous at this tolerance");

  const Eigen::MatrixXd T = isotropy_type_tangent(m, tol);
  if (T.cols() == 0) return 0;
  const Eigen::MatrixXd JT = momentum_jacobian(m) * T;
  return static_cast<int>(T.cols()) - numerical_rank(JT, tol.rank);
}

}  // namespace optred
