#include <doctest.h>

#include "optred/momentum.hpp"
#include "optred/optimal.hpp"
#include "optred/reduced.hpp"
#include "support.hpp"

using namespace optred;

namespace {

// H_rho for the free Hamiltonian (unit masses) on Case 7 with u0 = u03 e3.
double free_case7(double nu, double r, double lambda, double u03) {
  const double s = std::sin(nu);
  return r * r * s * s + (lambda * lambda + (1 - lambda) * (1 - lambda)) * u03 * u03 / 2;
}

// |q1 - q2|^2 along the Case 7 section.
double separation2_case7(double nu, double r, double mu, double u03) {
  const double c = std::cos(nu);
  return r * r * c * c + mu * mu * u03 * u03;
}

PhasePoint circular_kepler_start(OptimalLabel& rho) {
  rho = make_case7(Vec3d(0, 0, 1));
  return section(rho, ReducedPoint::generic(7, M_PI / 2, std::sqrt(0.5), 1.0, 0.5));
}

}  // namespace

TEST_CASE("reduced_form examples") {
  const TwoForm w3 = reduced_form(make_case3(1.0, Vec3d(0, 0, 2)), ReducedPoint::axis(3, 0.3, 0.1));
  CHECK(w3.rows() == 2);
  CHECK(w3(0, 1) == 4.0);
  CHECK(w3(1, 0) == -4.0);
  CHECK(w3(0, 0) == 0.0);

  const TwoForm w7 = reduced_form(make_case7(Vec3d(0, 0, 1.5)), ReducedPoint::generic(7, 0.4, 2.0, 0.1, 0.2));
  Eigen::Matrix4d expected = Eigen::Matrix4d::Zero();
  expected(0, 1) = 2.0;
  expected(1, 0) = -2.0;
  expected(2, 3) = -2.25;
  expected(3, 2) = 2.25;
  CHECK(testing::max_abs(w7 - expected) < 1e-15);

  CHECK(reduced_form(make_case1(Vec3d(1, 2, 3)), ReducedPoint::point()).size() == 0);
  CHECK(reduced_form(make_case6(Vec3d(0, 0, 1)), ReducedPoint::case6(3.0, 0.5))(0, 1) == -3.0);
  CHECK(reduced_form(make_case2(Vec3d(0, 0, 1)), ReducedPoint::polar(2, 2.0, 0.3))(0, 1) == 1.0);

  CHECK_THROWS_AS(reduced_form(make_case7(Vec3d(0, 0, 1)), ReducedPoint::generic(7, 0.4, 0.0, 0, 0)), DomainError);
  CHECK_THROWS_AS(reduced_form(make_case8(1.0, Vec3d(0, 0, 1)), ReducedPoint::generic(8, 0.0, 1, 0, 0)), DomainError);
  CHECK_THROWS_AS(reduced_form(make_case7(Vec3d(0, 0, 1)), ReducedPoint::axis(3, 1, 1)), DomainError);
}

TEST_CASE("pullback of the canonical form matches the reduced form") {
  Rng rng(211);
  for (int k = 2; k <= 10; ++k) {
    double worst = 0;
    for (int i = 0; i < 40; ++i) {
      const OptimalLabel rho = sample_label(k, rng);
      const ReducedPoint x = sample_reduced(rho, rng);
      worst = std::max(worst, testing::max_abs(pullback_form_numeric(rho, x) - reduced_form(rho, x)));
    }
    INFO("case " << k);
    CHECK(worst <= 1e-5);
  }
  CHECK(pullback_form_numeric(make_case1(Vec3d::Zero()), ReducedPoint::point()).size() == 0);
}

TEST_CASE("Case 8 carries the same form as Case 7") {
  Rng rng(223);
  for (int i = 0; i < 50; ++i) {
    const OptimalLabel rho8 = sample_label(8, rng);
    const OptimalLabel rho7 = make_case7(rho8.mu.u);
    ReducedPoint x = sample_reduced(rho8, rng), x7 = x;
    x7.case_id = 7;
    CHECK(testing::max_abs(pullback_form_numeric(rho8, x) - pullback_form_numeric(rho7, x7)) <= 1e-5);
  }
}

TEST_CASE("reduced Hamiltonians on Case 7") {
  const HamiltonianSpec free = make_hamiltonian("free");
  const HamiltonianSpec kepler = make_hamiltonian("kepler");
  Rng rng(227);
  for (int i = 0; i < 500; ++i) {
    const double u03 = uniform(rng, 0.3, 2);
    const OptimalLabel rho = make_case7(Vec3d(0, 0, u03));
    const double nu = uniform(rng, 0, M_PI), r = uniform(rng, 0.2, 2), mu = uniform(rng, -2, 2),
                 lambda = uniform(rng, -1, 2);
    const Eigen::Vector4d x(nu, r, mu, lambda);
    const double hf = reduced_hamiltonian(rho, free)(x);
    CHECK(hf == doctest::Approx(free_case7(nu, r, lambda, u03)).epsilon(1e-12));
    const double hk = reduced_hamiltonian(rho, kepler)(x);
    CHECK(hk == doctest::Approx(free_case7(nu, r, lambda, u03) - 1 / std::sqrt(separation2_case7(nu, r, mu, u03)))
                    .epsilon(1e-12));
  }
}

TEST_CASE("invariant Hamiltonians descend to the quotient") {
  Rng rng(229);
  const HamiltonianSpec H = make_hamiltonian("kepler", {1.3, 0.7, 2.0, 1.0});
  for (int k = 2; k <= 10; ++k) {
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
      const OptimalLabel rho = sample_label(k, rng);
      const PhasePoint m = sample_level_set(rho, rng);
      if ((m.q1 - m.q2).norm() < 1e-3) continue;
      const double h = H(m);
      worst = std::max(worst, std::abs(reduced_hamiltonian(rho, H)(project(rho, m).x) - h) / std::max(1.0, std::abs(h)));
    }
    INFO("case " << k);
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("reduced vector fields") {
  const ReducedFunction constant = [](const Eigen::VectorXd&) { return 2.5; };
  const OptimalLabel rho7 = make_case7(Vec3d(0, 0, 1));
  CHECK(reduced_vector_field(rho7, constant, ReducedPoint::generic(7, 0.3, 1, 0, 0)).norm() == 0.0);

  // Case 3 free flow: delta' = 2 gamma - delta0, gamma' = 0
  const double delta0 = 0.8;
  const OptimalLabel rho3 = make_case3(delta0, Vec3d(0, 0.6, 0.8));
  const HamiltonianSpec free = make_hamiltonian("free");
  const Eigen::VectorXd x3 = reduced_vector_field(rho3, reduced_hamiltonian(rho3, free), ReducedPoint::axis(3, 1.5, 0.1));
  CHECK(x3(0) == doctest::Approx(2 * 0.1 - delta0).epsilon(1e-8));
  CHECK(std::abs(x3(1)) < 1e-8);

  // Case 7 free flow: mu' = 1 - 2 lambda, lambda' = 0
  Rng rng(233);
  for (int i = 0; i < 100; ++i) {
    const OptimalLabel rho = make_case7(Vec3d(0, 0, uniform(rng, 0.5, 2)));
    const double lambda = uniform(rng, -1, 2);
    const Eigen::VectorXd x = reduced_vector_field(
        rho, reduced_hamiltonian(rho, free),
        ReducedPoint::generic(7, uniform(rng, 0.1, 3), uniform(rng, 0.5, 2), uniform(rng, -1, 1), lambda));
    CHECK(x(2) == doctest::Approx(1 - 2 * lambda).epsilon(1e-7));
    CHECK(std::abs(x(3)) < 1e-7);
  }
}

TEST_CASE("integrate") {
  const VectorField osc = [](double, const Eigen::VectorXd& y) -> Eigen::VectorXd {
    return Eigen::Vector2d(y(1), -y(0));
  };
  const Trajectory t = integrate(osc, Eigen::Vector2d(1, 0), 0, 1, 1e-3);
  CHECK(t.times.back() == 1.0);
  CHECK((t.states.back() - Eigen::Vector2d(std::cos(1.0), -std::sin(1.0))).norm() < 1e-9);

  const Trajectory uneven = integrate(osc, Eigen::Vector2d(1, 0), 0.5, 1, 0.3);
  CHECK(uneven.times.size() == 5);
  CHECK(uneven.times.back() == doctest::Approx(1.5).epsilon(1e-15));

  const VectorField growth = [](double, const Eigen::VectorXd& y) -> Eigen::VectorXd { return y; };
  const auto err = [&](double h) {
    const Trajectory tr = integrate(growth, Eigen::VectorXd::Ones(1), 0, 1, h, Integrator::implicit_midpoint);
    return std::abs(tr.states.back()(0) - std::exp(1.0));
  };
  const double ratio = err(0.02) / err(0.01);
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.05));

  CHECK_THROWS_AS(integrate(osc, Eigen::Vector2d(1, 0), 0, 1, 0.0), DomainError);
  CHECK_THROWS_AS(integrate(osc, Eigen::Vector2d(1, 0), 0, -1, 0.1), DomainError);
  CHECK(integrator_from_string("rk4") == Integrator::rk4);
  CHECK(integrator_from_string("midpoint") == Integrator::implicit_midpoint);
  CHECK_THROWS_AS(integrator_from_string("euler"), DomainError);
}

TEST_CASE("reduced_distance wraps angles") {
  CHECK(reduced_distance(7, Eigen::Vector4d(0.01, 1, 0, 0), Eigen::Vector4d(M_PI - 0.01, 1, 0, 0)) ==
        doctest::Approx(0.02));
  CHECK(reduced_distance(2, Eigen::Vector2d(1, 0.1), Eigen::Vector2d(1, 2 * M_PI - 0.1)) == doctest::Approx(0.2));
  CHECK(reduced_distance(3, Eigen::Vector2d(1, 0.1), Eigen::Vector2d(1, 2 * M_PI - 0.1)) ==
        doctest::Approx(2 * M_PI - 0.2));
}

TEST_CASE("full and reduced flows commute") {
  const HamiltonianSpec free = make_hamiltonian("free");
  const HamiltonianSpec kepler = make_hamiltonian("kepler");

  const OptimalLabel rho1 = make_case1(Vec3d(1, 2, 3));
  CHECK(commutation_check(rho1, free, parametrize(rho1, PointParam{}), 1, 1e-2) == 0.0);

  const OptimalLabel rho7 = make_case7(Vec3d(0.3, -0.4, 1.2));
  const PhasePoint m7 = section(rho7, ReducedPoint::generic(7, 0.3, 1.2, 0.5, 0.4));
  CHECK(commutation_check(rho7, free, m7, 1, 1e-3) <= 1e-6);

  OptimalLabel rho;
  const PhasePoint circ = circular_kepler_start(rho);
  const CommutationResult run = commutation_run(rho, kepler, circ, 1, 1e-3);
  CHECK(run.error <= 1e-4);
  CHECK(conservation_report(kepler, run.full).dH <= 1e-8);

  Rng rng(239);
  for (int k : {3, 5, 6, 8, 9, 10}) {
    const OptimalLabel r = sample_label(k, rng);
    const PhasePoint m = sample_level_set(r, rng);
    INFO("case " << k);
    CHECK(commutation_check(r, free, m, 0.2, 1e-3) <= 1e-6);
  }
}

TEST_CASE("conservation along the full flow") {
  Rng rng(241);
  const HamiltonianSpec free = make_hamiltonian("free");
  for (int i = 0; i < 20; ++i) {
    const PhasePoint m = random_phase_point(rng);
    const VectorField f = [&](double, const Eigen::VectorXd& y) -> Eigen::VectorXd {
      return hamiltonian_vector_field(free, PhasePoint::from_vector(y));
    };
    const ConservationReport rep = conservation_report(free, integrate(f, m.vector(), 0, 1, 1e-2));
    CHECK(rep.dJ <= 1e-10);
    CHECK(rep.dH <= 1e-12);
  }

  OptimalLabel rho;
  const PhasePoint circ = circular_kepler_start(rho);
  const HamiltonianSpec kepler = make_hamiltonian("kepler");
  const CommutationResult run = commutation_run(rho, kepler, circ, 1, 1e-3);
  CHECK(conservation_report(kepler, run.full).dJ <= 1e-8);

  // energy of the reduced trajectory
  const ReducedFunction Hr = reduced_hamiltonian(rho, kepler);
  const double h0 = Hr(run.reduced.states.front());
  double drift = 0;
  for (const auto& x : run.reduced.states) drift = std::max(drift, std::abs(Hr(x) - h0));
  CHECK(drift <= 1e-8);

  // an equilibrium stays put
  const PhasePoint rest(Vec3d(1, 0, 0), Vec3d(1, 0, 0), Vec3d::Zero(), Vec3d::Zero());
  const VectorField f = [&](double, const Eigen::VectorXd& y) -> Eigen::VectorXd {
    return hamiltonian_vector_field(free, PhasePoint::from_vector(y));
  };
  const ConservationReport eq = conservation_report(free, integrate(f, rest.vector(), 0, 1, 0.1));
  CHECK(eq.dH == 0.0);
  CHECK(eq.dJ == 0.0);

  Trajectory reduced_only;
  reduced_only.kind = StateKind::reduced;
  CHECK_THROWS_AS(conservation_report(free, reduced_only), DomainError);
}

TEST_CASE("Hamiltonian registry") {
  CHECK_THROWS_AS(make_hamiltonian("nope"), DomainError);
  CHECK_THROWS_AS(make_hamiltonian("free", {0.0, 1.0, 1.0, 1.0}), DomainError);
  const auto names = hamiltonian_names();
  for (const char* n : {"free", "kepler", "pn1"}) CHECK(std::find(names.begin(), names.end(), n) != names.end());

  register_hamiltonian("spring", [](const HamiltonianParams& p) {
    HamiltonianSpec s;
    s.name = "spring";
    s.params = p;
    s.H = [](const PhasePoint& m) {
      return 0.5 * (m.p1.squaredNorm() + m.p2.squaredNorm()) + 0.5 * (m.q1 - m.q2).squaredNorm();
    };
    return s;
  });
  const HamiltonianSpec spring = make_hamiltonian("spring");
  CHECK(static_cast<bool>(spring.gradient));
  const PhasePoint m(Vec3d(1, 0, 0), Vec3d(0, 0, 0), Vec3d(0, 1, 0), Vec3d(0, 0, 2));
  const Vec12d x = hamiltonian_vector_field(spring, m);
  Vec12d expected;
  expected << m.p1, m.p2, -(m.q1 - m.q2), m.q1 - m.q2;
  CHECK((x - expected).norm() < 1e-8);

  const HamiltonianSpec pn = make_hamiltonian("pn1");
  CHECK(pn.external);
  CHECK_FALSE(make_hamiltonian("kepler").external);

  Rng rng(251);
  for (int i = 0; i < 200; ++i) {
    const PhasePoint a = random_phase_point(rng);
    const SE3 g = random_se3(rng, 3);
    CHECK(pn(act_phase(g, a)) == doctest::Approx(pn(a)).epsilon(1e-12));
    HamiltonianParams far;
    far.c = 1e7;
    CHECK(make_hamiltonian("pn1", far)(a) == doctest::Approx(make_hamiltonian("kepler")(a)).epsilon(1e-10));
  }
}

TEST_CASE("ChartEscape carries the exit time") {
  const ChartEscape e("left the chart", 1.5);
  CHECK(e.exit_time == 1.5);
  CHECK(dynamic_cast<const NumericalError*>(&e) != nullptr);
}
