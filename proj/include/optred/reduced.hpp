#pragma once

// Reduced symplectic forms, invariant Hamiltonians and their reduced versions,
// fixed-step integrators, and the check that full and reduced flows agree.

#include <Eigen/Dense>

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "optred/errors.hpp"
#include "optred/euclid.hpp"
#include "optred/optimal.hpp"

namespace optred {

/// Matrix W with W(i, j) = omega(d_i, d_j) in the reduced coordinates of the case.
using TwoForm = Eigen::MatrixXd;

TwoForm reduced_form(const OptimalLabel& rho, const ReducedPoint& pt);

/// Pullback of sum_i dq_i ^ dp_i through section(rho, .) by central differences with step h.
TwoForm pullback_form_numeric(const OptimalLabel& rho, const ReducedPoint& pt, double h = 1e-5);

struct HamiltonianParams {
  double m1 = 1.0;
  double m2 = 1.0;
  double G = 1.0;
  double c = 1.0;
};

struct HamiltonianSpec {
  std::string name;
  HamiltonianParams params;
  std::function<double(const PhasePoint&)> H;
  /// dH/d(q1, q2, p1, p2); filled with central differences when not supplied.
  std::function<Vec12d(const PhasePoint&)> gradient;
  bool invariant = true;
  /// The formula does not come from the reduction itself (excluded from fidelity checks).
  bool external = false;

  double operator()(const PhasePoint& m) const { return H(m); }
};

using HamiltonianFactory = std::function<HamiltonianSpec(const HamiltonianParams&)>;

/// Registry keyed by name; ships "free", "kepler" and "pn1".
void register_hamiltonian(const std::string& name, HamiltonianFactory factory);
std::vector<std::string> hamiltonian_names();
/// Throws DomainError for an unknown name.
HamiltonianSpec make_hamiltonian(const std::string& name, const HamiltonianParams& params = {});

/// Central-difference gradient of a phase-space function.
Vec12d numeric_gradient(const std::function<double(const PhasePoint&)>& f, const PhasePoint& m,
                        double h = 1e-6);

using ReducedFunction = std::function<double(const Eigen::VectorXd&)>;

/// H_rho = H o section(rho, .), as a function of the reduced coordinate vector.
ReducedFunction reduced_hamiltonian(const OptimalLabel& rho, const HamiltonianSpec& H);

/// Solution X of omega(X, .) = dH_rho, i.e. X = -W^{-1} grad H_rho, with the gradient
/// by central differences of step 1e-6 (1 + |x_i|).
Eigen::VectorXd reduced_vector_field(const OptimalLabel& rho, const ReducedFunction& Hrho,
                                     const ReducedPoint& pt);

/// Hamilton's equations q' = dH/dp, p' = -dH/dq on the stacked 12-vector.
Vec12d hamiltonian_vector_field(const HamiltonianSpec& H, const PhasePoint& m);

enum class Integrator { rk4, implicit_midpoint };

const char* to_string(Integrator method);
Integrator integrator_from_string(const std::string& name);

enum class StateKind { phase, reduced };

struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
  StateKind kind = StateKind::phase;
  int case_id = 0;
  Integrator method = Integrator::rk4;
  double step = 0.0;
  std::string hamiltonian;
};

using VectorField = std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>;

/// Fixed-step integration over [t0, t0 + T]; the last step is shortened to land on t0 + T.
/// The implicit midpoint rule iterates to 1e-12 and throws NumericalError after 50 iterations.
Trajectory integrate(const VectorField& field, const Eigen::VectorXd& y0, double t0, double T,
                     double step, Integrator method = Integrator::rk4);

/// Distance between reduced points with angles compared modulo pi (nu) or 2 pi (phi).
double reduced_distance(int case_id, const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// Thrown when a trajectory leaves the level set or the coordinate chart.
class ChartEscape : public NumericalError {
 public:
  ChartEscape(const std::string& what, double t) : NumericalError(what), exit_time(t) {}
  double exit_time;
};

struct CommutationResult {
  double error = 0.0;
  Trajectory full;
  Trajectory reduced;
};

/// Integrates the 12-dimensional flow from m0 and the reduced flow from project(rho, m0)
/// and returns the largest distance between project(rho, m(t)) and the reduced solution.
CommutationResult commutation_run(const OptimalLabel& rho, const HamiltonianSpec& H,
                                  const PhasePoint& m0, double T, double step,
                                  Integrator method = Integrator::rk4);

inline double commutation_check(const OptimalLabel& rho, const HamiltonianSpec& H,
                                const PhasePoint& m0, double T, double step,
                                Integrator method = Integrator::rk4) {
  return commutation_run(rho, H, m0, T, step, method).error;
}

struct ConservationReport {
  double dH = 0.0;
  double dJ = 0.0;
};

ConservationReport conservation_report(const HamiltonianSpec& H, const Trajectory& traj);

}  // namespace optred
