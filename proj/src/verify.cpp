#include "optred/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

#include <json.hpp>

#include "optred/isotropy.hpp"
#include "optred/momentum.hpp"
#include "optred/optimal.hpp"
#include "optred/reduced.hpp"

namespace optred::verify {

namespace {

class Context {
 public:
  Context(const Options& opts, std::uint64_t stream) : opts_(opts), rng(opts.seed * 1000003ULL + stream) {}

  /// Pass iff value <= threshold (the override replaces the default threshold).
  void bound(const std::string& name, double value, double default_threshold,
             const std::string& detail = {}) {
    const double t = opts_.tolerance.value_or(default_threshold);
    checks.push_back({name, value, t, std::isfinite(value) && value <= t, detail});
  }

  /// Pass iff no failures.
  void count(const std::string& name, long failures, long total, const std::string& detail = {}) {
    std::string d = std::to_string(failures) + " of " + std::to_string(total) + " failed";
    if (!detail.empty()) d += "; " + detail;
    checks.push_back({name, static_cast<double>(failures), 0.0, failures == 0, d});
  }

  std::vector<Check> checks;
  const Options& opts_;
  Rng rng;
};

double rel_err(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double scale) {
  return (a - b).norm() / std::max(scale, 1e-300);
}

// ------------------------------------------------------------------ 1

void equivariance(Context& c) {
  double worst_j = 0.0, worst_act = 0.0, worst_conj = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const SE3 g = random_se3(c.rng, 2.0), h = random_se3(c.rng, 2.0);
    const PhasePoint m = random_phase_point(c.rng, 1.5);
    const MomentumValue lhs = momentum_map(act_phase(g, m));
    const MomentumValue rhs = coadjoint(g, momentum_map(m));
    const double scale = angular_scale(m) + m.p1.norm() + m.p2.norm() +
                         (m.p1 + m.p2).norm() * g.a.norm();
    worst_j = std::max(worst_j, rel_err(lhs.vector(), rhs.vector(), scale));

    const PhasePoint a = act_phase(compose(g, h), m);
    const PhasePoint b = act_phase(g, act_phase(h, m));
    worst_act = std::max(worst_act, rel_err(a.vector(), b.vector(), std::max(1.0, b.vector().norm())));

    const Vec3d t = random_vec3(c.rng);
    const SE3 l = conjugation(t, compose(g, h));
    const SE3 r = compose(conjugation(t, g), conjugation(t, h));
    worst_conj = std::max(worst_conj, (l.A - r.A).norm() + (l.a - r.a).norm() / std::max(1.0, r.a.norm()));
  }
  c.bound("J(g m) = Ad*_{g^-1} J(m), relative", worst_j, 1e-9, "10000 samples");
  c.bound("act(gh, m) = act(g, act(h, m)), relative", worst_act, 1e-10, "10000 samples");
  c.bound("C_a(gh) = C_a(g) C_a(h)", worst_conj, 1e-10, "10000 samples");
}

// ------------------------------------------------------------------ 2

void classifier(Context& c) {
  long wrong = 0, total = 0;
  double worst_fix = 0.0;
  std::string first_wrong;
  for (FineClass fc : kAllFineClasses) {
    for (int i = 0; i < 1000; ++i) {
      const PhasePoint m = sample_stratum(fc, c.rng);
      ++total;
      const FineClass got = classify_fine(m);
      if (got != fc) {
        if (!wrong) first_wrong = to_string(fc) + " classified as " + to_string(got);
        ++wrong;
        continue;
      }
      const IsotropyClass iso = isotropy_class(m);
      const double s = std::max(1.0, m.scale());
      for (int j = 0; j < 100; ++j) {
        const SE3 g = sample_isotropy_member(iso, c.rng);
        worst_fix = std::max(worst_fix, (act_phase(g, m).vector() - m.vector()).norm() / s);
      }
    }
  }
  c.count("classify_fine returns the generating stratum", wrong, total, first_wrong);
  c.bound("isotropy members fix the point", worst_fix, 1e-9, "100 members per sample");
}

// ------------------------------------------------------------------ 3

void coverage(Context& c) {
  long bad_case = 0, bad_member = 0, bad_dim = 0, total = 0;
  std::string note;
  for (int k = 1; k <= 10; ++k) {
    for (int i = 0; i < 300; ++i) {
      const OptimalLabel rho = sample_label(k, c.rng);
      const PhasePoint m = sample_level_set(rho, c.rng);
      ++total;
      const OptimalLabel got = label(m);
      if (got.case_id != k || !same_label(got, rho, 1e-7)) {
        if (!bad_case) note = "case " + std::to_string(k) + " labelled " + std::to_string(got.case_id);
        ++bad_case;
      }
      if (!level_set_contains(rho, m)) ++bad_member;
      try {
        if (char_distribution_dim(m) != case_info(k).level_set_dim) ++bad_dim;
      } catch (const std::exception&) {
        ++bad_dim;
      }
    }
  }
  c.count("label(m) recovers the generating label", bad_case, total, note);
  c.count("level_set_contains(rho, m)", bad_member, total);
  c.count("char_distribution_dim equals the level-set dimension", bad_dim, total);
}

// ------------------------------------------------------------------ 4

void section_suite(Context& c) {
  double worst_j = 0.0, worst_rt = 0.0;
  long bad_member = 0, total = 0;
  for (int k = 2; k <= 10; ++k) {
    for (int i = 0; i < 500; ++i) {
      const OptimalLabel rho = sample_label(k, c.rng);
      const ReducedPoint pt = sample_reduced(rho, c.rng);
      const PhasePoint m = section(rho, pt);
      ++total;
      const double scale = std::max(1.0, rho.mu.vector().norm());
      worst_j = std::max(worst_j, (momentum_map(m).vector() - rho.mu.vector()).norm() / scale);
      if (!level_set_contains(rho, m)) {
        ++bad_member;
        continue;
      }
      worst_rt = std::max(worst_rt, reduced_distance(k, project(rho, m).x, pt.x));
    }
  }
  c.bound("J(section(pt)) = mu", worst_j, 1e-10, "500 points per case 2-10");
  c.bound("project(section(pt)) = pt", worst_rt, 1e-9, "Cases 2/4 through the double cover");
  c.count("section lands on the level set", bad_member, total);
}

// ------------------------------------------------------------------ 5

void forms(Context& c) {
  double worst = 0.0, worst_cancel = 0.0;
  long degenerate = 0;
  int worst_case = 0;
  for (int k = 2; k <= 10; ++k) {
    for (int i = 0; i < 200; ++i) {
      const OptimalLabel rho = sample_label(k, c.rng);
      const ReducedPoint pt = sample_reduced(rho, c.rng);
      const TwoForm W = reduced_form(rho, pt);
      const double e = (pullback_form_numeric(rho, pt, 1e-5) - W).cwiseAbs().maxCoeff();
      if (e > worst) {
        worst = e;
        worst_case = k;
      }
      if (std::abs(W.determinant()) < 1e-12) ++degenerate;
      if (k == 8) {
        const OptimalLabel rho7 = make_case7(rho.mu.u);
        const ReducedPoint pt7 = ReducedPoint::generic(7, pt.x(0), pt.x(1), pt.x(2), pt.x(3));
        const double d = (pullback_form_numeric(rho, pt, 1e-5) - pullback_form_numeric(rho7, pt7, 1e-5))
                             .cwiseAbs()
                             .maxCoeff();
        worst_cancel = std::max(worst_cancel, d);
      }
    }
  }
  c.bound("finite-difference pullback = closed-form form (max entry)", worst, 1e-5,
          "h = 1e-5, 200 points per case 2-10; worst in case " + std::to_string(worst_case));
  c.bound("Case 8 pullback equals Case 7 pullback (dq terms cancel)", worst_cancel, 1e-5);
  c.count("reduced forms are nondegenerate", degenerate, 9 * 200);
}

// ------------------------------------------------------------------ 6

void conjugation_suite(Context& c) {
  const MatchTolerance exact{1e-10, 1e-10};
  struct Pair {
    int base, target;
  };
  for (const Pair pr : {Pair{2, 4}, Pair{3, 5}, Pair{7, 9}, Pair{8, 10}}) {
    long bad_label = 0, bad_fwd = 0, bad_back = 0;
    double worst_pt = 0.0;
    for (int i = 0; i < 500; ++i) {
      const OptimalLabel base = sample_label(pr.base, c.rng);
      Vec3d a;
      if (pr.base <= 3) {
        a = random_orthogonal(c.rng, base.y0) + uniform(c.rng, -1.0, 1.0) * base.y0;
      } else {
        // alpha0 orthogonal to u0; a = u0 x alpha0 / |u0|^2 solves a x u0 = alpha0
        const Vec3d alpha0 = random_orthogonal(c.rng, base.mu.u);
        a = base.mu.u.cross(alpha0) / base.mu.u.squaredNorm();
      }
      const OptimalLabel target = transport(a, base);
      if (target.case_id != pr.target) {
        ++bad_label;
        continue;
      }
      const LevelSetParam p = sample_param(base, c.rng);
      const PhasePoint m = parametrize(base, p);
      if (!level_set_contains(target, translate(a, m), exact)) ++bad_fwd;
      const PhasePoint n = sample_level_set(target, c.rng);
      if (!level_set_contains(base, translate(Vec3d(-a), n), exact)) ++bad_back;
      const PhasePoint direct = parametrize(target, p);
      worst_pt = std::max(worst_pt, (direct.vector() - translate(a, m).vector()).norm() /
                                        std::max(1.0, direct.scale()));
    }
    const std::string tag = "Case " + std::to_string(pr.target) + " = T_a Case " + std::to_string(pr.base);
    c.count(tag + ": transported label has the target case", bad_label, 500);
    c.count(tag + ": T_a maps base level set into target", bad_fwd, 500);
    c.count(tag + ": T_-a maps target level set into base", bad_back, 500);
    c.bound(tag + ": parametrizations agree pointwise", worst_pt, 1e-10);
  }
}

// ------------------------------------------------------------------ 7

void fiber(Context& c) {
  struct Regime {
    std::string name;
    MomentumValue mu;
    std::vector<std::function<OptimalLabel()>> families;
  };
  const auto nz = [&] { return signed_uniform(c.rng, 0.5, 2.0); };
  const Vec3d u0 = random_unit(c.rng) * uniform(c.rng, 0.5, 2.0);
  const Vec3d alpha_perp = random_orthogonal(c.rng, u0);
  const double d8 = nz();
  const Vec3d alpha10 = random_orthogonal(c.rng, u0) + nz() * u0;
  const Vec3d alpha6 = random_vec3(c.rng);
  const Vec3d a9 = u0.cross(alpha_perp) / u0.squaredNorm();

  std::vector<Regime> regimes;
  regimes.push_back({"(0,0)", {}, {[&] { return make_case1(random_vec3(c.rng)); },
                                   [&] { return make_case2(random_vec3(c.rng)); },
                                   [&] {
                                     const Vec3d y = random_vec3(c.rng);
                                     return make_case4(random_orthogonal(c.rng, y), y);
                                   }}});
  regimes.push_back({"(alpha0,0)", {alpha6, Vec3d::Zero()}, {[&] { return make_case6(alpha6); }}});
  regimes.push_back({"(0,u0)", {Vec3d::Zero(), u0},
                     {[&] {
                        const double d = nz();
                        return make_case3(d, Vec3d(u0 / d));
                      },
                      [&] { return make_case7(u0); }}});
  regimes.push_back({"(delta0 u0,u0)", {d8 * u0, u0}, {[&] { return make_case8(d8, u0); }}});
  regimes.push_back({"(alpha0 perp u0, u0)", {alpha_perp, u0},
                     {[&] { return make_case9(alpha_perp, u0); },
                      [&] {
                        const double d = nz();
                        const Vec3d y = u0 / d;
                        return make_case5(d, a9 + uniform(c.rng, -1.0, 1.0) * y, y);
                      }}});
  regimes.push_back({"(alpha0, u0) general", {alpha10, u0}, {[&] { return make_case10(alpha10, u0); }}});

  for (const Regime& r : regimes) {
    const std::vector<int> fam = decompose_momentum_fiber(r.mu);
    long bad = 0, off_fiber = 0;
    for (int i = 0; i < 1000; ++i) {
      const auto& make = r.families[i % r.families.size()];
      const OptimalLabel rho = make();
      const PhasePoint m = sample_level_set(rho, c.rng);
      const Eigen::Matrix<double, 6, 1> d = momentum_map(m).vector() - r.mu.vector();
      if (d.norm() > 1e-9 * std::max(1.0, r.mu.vector().norm())) ++off_fiber;
      const int k = label(m).case_id;
      if (std::count(fam.begin(), fam.end(), k) != 1 || k != rho.case_id) ++bad;
    }
    c.count("fiber " + r.name + ": points lie in the fiber", off_fiber, 1000);
    c.count("fiber " + r.name + ": label in exactly one listed family", bad, 1000);
  }
}

// ------------------------------------------------------------------ 8

// Initial data kept away from collisions and chart boundaries over t in [0, 1].
PhasePoint dynamics_start(const OptimalLabel& rho, Rng& rng) {
  ReducedPoint pt;
  switch (rho.case_id) {
    case 3:
      pt = ReducedPoint::axis(3, signed_uniform(rng, 1.5, 2.5),
                              rho.delta0 / 2 + uniform(rng, -0.2, 0.2));
      break;
    case 6: pt = ReducedPoint::case6(uniform(rng, 0.5, 1.0), uniform(rng, -1.0, 1.0)); break;
    default:
      pt = ReducedPoint::generic(rho.case_id, uniform(rng, 0.1, 0.5), uniform(rng, 1.0, 1.5),
                                 signed_uniform(rng, 1.0, 1.5), uniform(rng, 0.3, 0.7));
      break;
  }
  return act_phase(g_rho(rho).sample(rng), section(rho, pt));
}

// Smallest |q1 - q2| over [0, 1] under Kepler with G = m1 = m2 = 1, from the
// relative motion r'' = -2 r / |r|^3 with a fine RK4 step.
double closest_approach(const PhasePoint& m) {
  using V6 = Eigen::Matrix<double, 6, 1>;
  const auto f = [](const V6& y) {
    const Vec3d r = y.head<3>();
    V6 d;
    d << y.tail<3>(), -2.0 * r / std::pow(r.norm(), 3);
    return d;
  };
  V6 y;
  y << m.q1 - m.q2, m.p1 - m.p2;
  double least = y.head<3>().norm();
  const double h = 2.5e-4;
  for (int i = 0; i < 4000; ++i) {
    const V6 k1 = f(y), k2 = f(y + h / 2 * k1), k3 = f(y + h / 2 * k2), k4 = f(y + h * k3);
    y += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    least = std::min(least, y.head<3>().norm());
  }
  return least;
}

OptimalLabel dynamics_label(int k, Rng& rng) {
  const Vec3d u0 = random_unit(rng);
  switch (k) {
    case 3: return make_case3(signed_uniform(rng, 0.5, 1.0), random_unit(rng));
    case 6: return make_case6(1.5 * random_unit(rng));
    case 7: return make_case7(u0);
    default: return make_case9(random_orthogonal(rng, u0), u0);
  }
}

void dynamics(Context& c) {
  const HamiltonianSpec free_h = make_hamiltonian("free");
  const HamiltonianSpec kepler = make_hamiltonian("kepler");
  double free_err = 0.0, kep_err = 0.0, drift = 0.0;
  long escapes = 0;
  std::string note;
  for (int k : {3, 6, 7, 9}) {
    for (int i = 0; i < 10; ++i) {
      OptimalLabel rho;
      PhasePoint m0;
      int tries = 0;
      do {
        if (++tries > 1000) throw NumericalError("dynamics: no collision-free start found");
        rho = dynamics_label(k, c.rng);
        m0 = dynamics_start(rho, c.rng);
      } while (closest_approach(m0) < 0.5);
      for (const HamiltonianSpec* H : {&free_h, &kepler}) {
        try {
          const CommutationResult r = commutation_run(rho, *H, m0, 1.0, 1e-3);
          (H == &free_h ? free_err : kep_err) = std::max(H == &free_h ? free_err : kep_err, r.error);
          drift = std::max(drift, conservation_report(*H, r.full).dJ);
        } catch (const ChartEscape& e) {
          if (!escapes) note = "case " + std::to_string(k) + ": " + e.what();
          ++escapes;
        }
      }
    }
  }
  // Kepler circular start: nu = pi/2, lambda = 1/2, mu = 1, u0 = e3, r = sqrt(1/2).
  const OptimalLabel rho7 = make_case7(Vec3d::UnitZ());
  const PhasePoint circ = section(rho7, ReducedPoint::generic(7, M_PI / 2, std::sqrt(0.5), 1.0, 0.5));
  const CommutationResult r = commutation_run(rho7, kepler, circ, 1.0, 1e-3);
  kep_err = std::max(kep_err, r.error);
  drift = std::max(drift, conservation_report(kepler, r.full).dJ);

  c.bound("free Hamiltonian commutation error", free_err, 1e-6, "Cases 3, 6, 7, 9; T = 1, step 1e-3");
  c.bound("Kepler commutation error", kep_err, 1e-4, "Cases 3, 6, 7, 9 and the circular start");
  c.bound("full-flow momentum drift", drift, 1e-8);
  c.count("trajectories stay in the chart", escapes, 4 * 10 * 2, note);
}

// ------------------------------------------------------------------ 9

void closed_form(Context& c) {
  const HamiltonianSpec free_h = make_hamiltonian("free");
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const OptimalLabel rho = make_case7(random_unit(c.rng) * uniform(c.rng, 0.5, 2.0));
    const ReducedPoint pt = sample_reduced(rho, c.rng);
    const double nu = pt.x(0), r = pt.x(1), lambda = pt.x(3);
    const double u2 = rho.mu.u.squaredNorm();
    const double oracle =
        r * r * std::sin(nu) * std::sin(nu) + (lambda * lambda + (1 - lambda) * (1 - lambda)) * u2 / 2;
    const double got = reduced_hamiltonian(rho, free_h)(pt.x);
    worst = std::max(worst, std::abs(got - oracle) / std::max(1.0, std::abs(oracle)));
  }
  c.bound("Case 7 free H_rho = r^2 sin^2 nu + (lambda^2 + (1-lambda)^2) u03^2 / 2", worst, 1e-12,
          "1000 points");
}

struct Suite {
  int criterion;
  const char* title;
  double limit;
  void (*run)(Context&);
};

const std::map<std::string, Suite>& suites() {
  static const std::map<std::string, Suite> s = {
      {"equivariance", {1, "momentum map equivariance", 5, equivariance}},
      {"classifier", {2, "fine classifier soundness", 30, classifier}},
      {"coverage", {3, "case coverage and level-set dimension", 60, coverage}},
      {"section", {4, "section/projection coherence", 30, section_suite}},
      {"forms", {5, "reduced form fidelity", 60, forms}},
      {"conjugation", {6, "conjugation relations", 10, conjugation_suite}},
      {"fiber", {7, "momentum fiber decomposition", 20, fiber}},
      {"dynamics", {8, "dynamics commutation", 30, dynamics}},
      {"closed_form", {9, "Case 7 closed-form reduced Hamiltonian", 1, closed_form}},
  };
  return s;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"equivariance", "classifier", "coverage",
                                                 "section",      "forms",      "conjugation",
                                                 "fiber",        "dynamics",   "closed_form"};
  return names;
}

SuiteResult run_suite(const std::string& name, const Options& opts) {
  const auto it = suites().find(name);
  if (it == suites().end()) throw std::invalid_argument("unknown suite '" + name + "'");
  const Suite& s = it->second;
  SuiteResult res;
  res.name = name;
  res.criterion = s.criterion;
  res.title = s.title;
  res.time_limit = s.limit;
  Context ctx(opts, static_cast<std::uint64_t>(s.criterion));
  const auto t0 = std::chrono::steady_clock::now();
  try {
    s.run(ctx);
  } catch (const std::exception& e) {
    ctx.checks.push_back({"suite completed", 1.0, 0.0, false, e.what()});
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  res.checks = std::move(ctx.checks);
  res.pass = !res.checks.empty();
  for (const Check& c : res.checks) res.pass = res.pass && c.pass;
  return res;
}

std::string to_json(const std::vector<SuiteResult>& results, const Options& opts) {
  nlohmann::ordered_json j;
  j["seed"] = opts.seed;
  if (opts.tolerance) j["tolerance"] = *opts.tolerance;
  bool all = true;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const SuiteResult& r : results) {
    nlohmann::ordered_json s;
    s["suite"] = r.name;
    s["criterion"] = r.criterion;
    s["title"] = r.title;
    s["pass"] = r.pass;
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const Check& c : r.checks) {
      checks.push_back({{"name", c.name},
                        {"value", c.value},
                        {"threshold", c.threshold},
                        {"pass", c.pass},
                        {"detail", c.detail}});
    }
    s["checks"] = checks;
    arr.push_back(s);
    all = all && r.pass;
  }
  j["suites"] = arr;
  j["pass"] = all;
  return j.dump(2);
}

}  // namespace optred::verify
