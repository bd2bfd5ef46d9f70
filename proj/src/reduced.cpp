#include "optred/reduced.hpp"

#include <cmath>
#include <mutex>

#include "optred/momentum.hpp"

namespace optred {

// ---------------------------------------------------------------- forms

TwoForm reduced_form(const OptimalLabel& rho, const ReducedPoint& pt) {
  if (pt.case_id != rho.case_id || pt.x.size() != reduced_dimension(rho.case_id))
    throw DomainError("reduced_form: reduced point does not belong to this case");
  const int k = rho.case_id;
  const int d = reduced_dimension(k);
  TwoForm W = TwoForm::Zero(d, d);
  const auto put = [&W](int i, int j, double v) {
    W(i, j) = v;
    W(j, i) = -v;
  };
  switch (k) {
    case 1: break;
    case 2:
    case 4: {
      const double r = pt.x(0);
      if (!(r > 0.0)) throw DomainError("reduced_form: Cases 2/4 need r > 0");
      put(0, 1, 0.5 * rho.y0.squaredNorm() * r);  // (1/2)|y0|^2 r dr ^ dphi
      break;
    }
    case 3:
    case 5: put(0, 1, rho.y0.squaredNorm()); break;  // |y0|^2 ddelta ^ dgamma
    case 6: {
      const double c = pt.x(0);
      if (!(c > 0.0)) throw DomainError("reduced_form: Case 6 needs c > 0");
      put(0, 1, -c);  // c dlambda ^ dc
      break;
    }
    default: {
      const double r = pt.x(1);
      if (!(r > 0.0)) throw DomainError("reduced_form: Cases 7-10 need r > 0");
      if ((k == 8 || k == 10) && !(pt.x(0) > 0.0 && pt.x(0) < M_PI))
        throw DomainError("reduced_form: Cases 8/10 need nu in (0, pi)");
      // -r dr ^ dnu - u03^2 dmu ^ dlambda in the order (nu, r, mu, lambda)
      put(0, 1, r);
      put(2, 3, -rho.mu.u.squaredNorm());
      break;
    }
  }
  return W;
}

TwoForm pullback_form_numeric(const OptimalLabel& rho, const ReducedPoint& pt, double h) {
  if (!(h > 0.0)) throw DomainError("pullback_form_numeric: step must be positive");
  const int d = static_cast<int>(pt.x.size());
  Eigen::MatrixXd D(12, d);
  for (int i = 0; i < d; ++i) {
    ReducedPoint plus = pt, minus = pt;
    plus.x(i) += h;
    minus.x(i) -= h;
    D.col(i) = (section(rho, plus).vector() - section(rho, minus).vector()) / (2.0 * h);
  }
  const Eigen::MatrixXd Dq = D.topRows(6);
  const Eigen::MatrixXd Dp = D.bottomRows(6);
  return Dq.transpose() * Dp - Dp.transpose() * Dq;
}

// ---------------------------------------------------------------- Hamiltonians

Vec12d numeric_gradient(const std::function<double(const PhasePoint&)>& f, const PhasePoint& m,
                        double h) {
  const Vec12d x = m.vector();
  Vec12d g;
  for (int i = 0; i < 12; ++i) {
    const double hi = h * (1.0 + std::abs(x(i)));
    Vec12d a = x, b = x;
    a(i) += hi;
    b(i) -= hi;
    g(i) = (f(PhasePoint::from_vector(a)) - f(PhasePoint::from_vector(b))) / (2.0 * hi);
  }
  return g;
}

namespace {

HamiltonianSpec make_free(const HamiltonianParams& p) {
  HamiltonianSpec s;
  s.name = "free";
  s.params = p;
  s.H = [p](const PhasePoint& m) {
    return m.p1.squaredNorm() / (2.0 * p.m1) + m.p2.squaredNorm() / (2.0 * p.m2);
  };
  s.gradient = [p](const PhasePoint& m) {
    Vec12d g = Vec12d::Zero();
    g.segment<3>(6) = m.p1 / p.m1;
    g.segment<3>(9) = m.p2 / p.m2;
    return g;
  };
  return s;
}

HamiltonianSpec make_kepler(const HamiltonianParams& p) {
  HamiltonianSpec s = make_free(p);
  s.name = "kepler";
  const double k = p.G * p.m1 * p.m2;
  s.H = [p, k](const PhasePoint& m) {
    return m.p1.squaredNorm() / (2.0 * p.m1) + m.p2.squaredNorm() / (2.0 * p.m2) -
           k / (m.q1 - m.q2).norm();
  };
  s.gradient = [p, k](const PhasePoint& m) {
    const Vec3d d = m.q1 - m.q2;
    const double r = d.norm();
    const Vec3d f = k * d / (r * r * r);
    Vec12d g;
    g << f, -f, m.p1 / p.m1, m.p2 / p.m2;
    return g;
  };
  return s;
}

// ADM first post-Newtonian correction added to the Newtonian two-body Hamiltonian.
HamiltonianSpec make_pn1(const HamiltonianParams& p) {
  HamiltonianSpec s;
  s.name = "pn1";
  s.params = p;
  s.external = true;
  s.H = [p](const PhasePoint& m) {
    const Vec3d d = m.q1 - m.q2;
    const double r = d.norm();
    const Vec3d n = d / r;
    const double m1 = p.m1, m2 = p.m2, G = p.G;
    const double a = m.p1.squaredNorm(), b = m.p2.squaredNorm();
    const double newton = a / (2 * m1) + b / (2 * m2) - G * m1 * m2 / r;
    const double pn = -a * a / (8 * m1 * m1 * m1) - b * b / (8 * m2 * m2 * m2) +
                      G * m1 * m2 / (2 * r) *
                          (-3 * a / (m1 * m1) - 3 * b / (m2 * m2) +
                           7 * m.p1.dot(m.p2) / (m1 * m2) + n.dot(m.p1) * n.dot(m.p2) / (m1 * m2)) +
                      G * G * m1 * m2 * (m1 + m2) / (2 * r * r);
    return newton + pn / (p.c * p.c);
  };
  return s;
}

std::map<std::string, HamiltonianFactory>& registry() {
  static std::map<std::string, HamiltonianFactory> r = {
      {"free", make_free}, {"kepler", make_kepler}, {"pn1", make_pn1}};
  return r;
}

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

void register_hamiltonian(const std::string& name, HamiltonianFactory factory) {
  std::lock_guard<std::mutex> lock(registry_mutex());
  registry()[name] = std::move(factory);
}

std::vector<std::string> hamiltonian_names() {
  std::lock_guard<std::mutex> lock(registry_mutex());
  std::vector<std::string> out;
  for (const auto& [name, f] : registry()) out.push_back(name);
  return out;
}

HamiltonianSpec make_hamiltonian(const std::string& name, const HamiltonianParams& params) {
  HamiltonianFactory f;
  {
    std::lock_guard<std::mutex> lock(registry_mutex());
    const auto it = registry().find(name);
    if (it == registry().end()) throw DomainError("unknown Hamiltonian '" + name + "'");
    f = it->second;
  }
  if (!(params.m1 > 0 && params.m2 > 0 && params.c > 0))
    throw DomainError("Hamiltonian parameters need positive masses and c");
  HamiltonianSpec s = f(params);
  if (!s.gradient) {
    auto H = s.H;
    s.gradient = [H](const PhasePoint& m) { return numeric_gradient(H, m); };
  }
  return s;
}

Vec12d hamiltonian_vector_field(const HamiltonianSpec& H, const PhasePoint& m) {
  const Vec12d g = H.gradient ? H.gradient(m) : numeric_gradient(H.H, m);
  Vec12d x;
  x << g.tail<6>(), -g.head<6>();
  return x;
}

ReducedFunction reduced_hamiltonian(const OptimalLabel& rho, const HamiltonianSpec& H) {
  return [rho, H](const Eigen::VectorXd& x) { return H.H(section(rho, {rho.case_id, x})); };
}

Eigen::VectorXd reduced_vector_field(const OptimalLabel& rho, const ReducedFunction& Hrho,
                                     const ReducedPoint& pt) {
  const TwoForm W = reduced_form(rho, pt);
  const int d = static_cast<int>(pt.x.size());
  if (d == 0) return Eigen::VectorXd(0);
  Eigen::VectorXd grad(d);
  for (int i = 0; i < d; ++i) {
    const double h = 1e-6 * (1.0 + std::abs(pt.x(i)));
    Eigen::VectorXd a = pt.x, b = pt.x;
    a(i) += h;
    b(i) -= h;
    grad(i) = (Hrho(a) - Hrho(b)) / (2.0 * h);
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(W);
  if (!lu.isInvertible()) throw NumericalError("reduced_vector_field: degenerate reduced form");
  return -lu.solve(grad);
}

// ---------------------------------------------------------------- integration

const char* to_string(Integrator method) {
  return method == Integrator::rk4 ? "rk4" : "implicit_midpoint";
}

Integrator integrator_from_string(const std::string& name) {
  if (name == "rk4") return Integrator::rk4;
  if (name == "implicit_midpoint" || name == "midpoint") return Integrator::implicit_midpoint;
  throw DomainError("unknown integrator '" + name + "'");
}

Trajectory integrate(const VectorField& field, const Eigen::VectorXd& y0, double t0, double T,
                     double step, Integrator method) {
  if (!(step > 0.0)) throw DomainError("integrate: step must be positive");
  if (!(T >= 0.0)) throw DomainError("integrate: T must be non-negative");
  Trajectory traj;
  traj.method = method;
  traj.step = step;
  traj.times.push_back(t0);
  traj.states.push_back(y0);

  const long n = static_cast<long>(std::ceil(T / step - 1e-9));
  Eigen::VectorXd y = y0;
  double t = t0;
  for (long i = 1; i <= n; ++i) {
    const double t_next = (i == n) ? t0 + T : t0 + static_cast<double>(i) * step;
    const double h = t_next - t;
    if (method == Integrator::rk4) {
      const Eigen::VectorXd k1 = field(t, y);
      const Eigen::VectorXd k2 = field(t + h / 2, y + h / 2 * k1);
      const Eigen::VectorXd k3 = field(t + h / 2, y + h / 2 * k2);
      const Eigen::VectorXd k4 = field(t + h, y + h * k3);
      y += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    } else {
      Eigen::VectorXd next = y + h * field(t, y);
      bool converged = false;
      for (int it = 0; it < 50; ++it) {
        const Eigen::VectorXd upd = y + h * field(t + h / 2, 0.5 * (y + next));
        const double diff = (upd - next).norm();
        next = upd;
        if (diff <= 1e-12 * (1.0 + next.norm())) {
          converged = true;
          break;
        }
      }
      if (!converged)
        throw NumericalError("implicit midpoint did not converge at t = " + std::to_string(t));
      y = next;
    }
    if (!y.allFinite()) throw NumericalError("integration produced non-finite state at t = " +
                                             std::to_string(t_next));
    t = t_next;
    traj.times.push_back(t);
    traj.states.push_back(y);
  }
  return traj;
}

double reduced_distance(int case_id, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) throw DomainError("reduced_distance: dimension mismatch");
  const auto circ = [](double d, double period) {
    d = std::fmod(std::abs(d), period);
    return std::min(d, period - d);
  };
  double out = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    double d = std::abs(a(i) - b(i));
    if ((case_id == 2 || case_id == 4) && i == 1) d = circ(d, 2.0 * M_PI);
    if (case_id >= 7 && i == 0) d = circ(d, M_PI);
    out = std::max(out, d);
  }
  return out;
}

CommutationResult commutation_run(const OptimalLabel& rho, const HamiltonianSpec& H,
                                  const PhasePoint& m0, double T, double step, Integrator method) {
  CommutationResult res;
  const VectorField full = [&H](double, const Eigen::VectorXd& y) -> Eigen::VectorXd {
    return hamiltonian_vector_field(H, PhasePoint::from_vector(y));
  };
  res.full = integrate(full, m0.vector(), 0.0, T, step, method);
  res.full.hamiltonian = H.name;

  const ReducedPoint x0 = project(rho, m0);
  const ReducedFunction Hrho = reduced_hamiltonian(rho, H);
  const VectorField red = [&](double t, const Eigen::VectorXd& x) -> Eigen::VectorXd {
    try {
      return reduced_vector_field(rho, Hrho, {rho.case_id, x});
    } catch (const DomainError& e) {
      throw ChartEscape(std::string("reduced trajectory left the chart: ") + e.what(), t);
    }
  };
  res.reduced = integrate(red, x0.x, 0.0, T, step, method);
  res.reduced.kind = StateKind::reduced;
  res.reduced.case_id = rho.case_id;
  res.reduced.hamiltonian = H.name;

  const MatchTolerance loose{1e-6, 1e-8};
  for (std::size_t i = 0; i < res.full.times.size(); ++i) {
    ReducedPoint p;
    try {
      p = project(rho, PhasePoint::from_vector(res.full.states[i]), loose);
    } catch (const DomainError& e) {
      throw ChartEscape(std::string("full trajectory left the level set: ") + e.what(),
                        res.full.times[i]);
    }
    res.error = std::max(res.error, reduced_distance(rho.case_id, p.x, res.reduced.states[i]));
  }
  return res;
}

ConservationReport conservation_report(const HamiltonianSpec& H, const Trajectory& traj) {
  if (traj.kind != StateKind::phase)
    throw DomainError("conservation_report: needs a full phase-space trajectory");
  ConservationReport rep;
  if (traj.states.empty()) return rep;
  const PhasePoint m0 = PhasePoint::from_vector(traj.states.front());
  const double H0 = H.H(m0);
  const auto J0 = momentum_map(m0).vector();
  for (const auto& s : traj.states) {
    const PhasePoint m = PhasePoint::from_vector(s);
    rep.dH = std::max(rep.dH, std::abs(H.H(m) - H0));
    rep.dJ = std::max(rep.dJ, (momentum_map(m).vector() - J0).cwiseAbs().maxCoeff());
  }
  return rep;
}

}  // namespace optred
