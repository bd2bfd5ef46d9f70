#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "optred/isotropy.hpp"
#include "optred/momentum.hpp"
#include "optred/optimal.hpp"
#include "optred/reduced.hpp"
#include "optred/verify.hpp"

namespace optred::cli {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct BadInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string input;
  std::string output;
  std::uint64_t seed = verify::Options{}.seed;
  double step = 1e-3;
  double T = 1.0;
  std::string method = "rk4";
  std::string hamiltonian = "free";
  HamiltonianParams params;
  std::string suite;
  std::optional<double> tolerance;
  Tolerance geometry = kDefaultTolerance;
  std::optional<Vec12d> reference_point;
};

// ------------------------------------------------------------------ config

template <typename T>
T get(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw BadInput(std::string("config key '") + key + "': " + e.what());
  }
}

void load_config(const std::string& path, RunConfig& c) {
  std::ifstream in(path);
  if (!in) throw BadInput("cannot read config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw BadInput("config file '" + path + "': " + e.what());
  }
  if (!j.is_object()) throw BadInput("config file must hold a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "input") c.input = get<std::string>(j, "input");
    else if (key == "output") c.output = get<std::string>(j, "output");
    else if (key == "seed") c.seed = get<std::uint64_t>(j, "seed");
    else if (key == "step") c.step = get<double>(j, "step");
    else if (key == "T") c.T = get<double>(j, "T");
    else if (key == "method") c.method = get<std::string>(j, "method");
    else if (key == "hamiltonian") c.hamiltonian = get<std::string>(j, "hamiltonian");
    else if (key == "suite") c.suite = get<std::string>(j, "suite");
    else if (key == "tolerance") c.tolerance = get<double>(j, "tolerance");
    else if (key == "params") {
      for (const auto& [k, v] : value.items()) {
        if (k == "m1") c.params.m1 = get<double>(value, "m1");
        else if (k == "m2") c.params.m2 = get<double>(value, "m2");
        else if (k == "G") c.params.G = get<double>(value, "G");
        else if (k == "c") c.params.c = get<double>(value, "c");
        else throw BadInput("unknown Hamiltonian parameter '" + k + "'");
      }
    } else if (key == "classifier_tolerance") {
      for (const auto& [k, v] : value.items()) {
        if (k == "parallel") c.geometry.parallel = get<double>(value, "parallel");
        else if (k == "zero") c.geometry.zero = get<double>(value, "zero");
        else if (k == "rank") c.geometry.rank = get<double>(value, "rank");
        else throw BadInput("unknown classifier tolerance '" + k + "'");
      }
    } else if (key == "reference_point") {
      const auto v = get<std::vector<double>>(j, "reference_point");
      if (v.size() != 12) throw BadInput("reference_point needs 12 reals");
      c.reference_point = Eigen::Map<const Vec12d>(v.data());
    } else {
      throw BadInput("unknown config key '" + key + "'");
    }
  }
}

void validate(const RunConfig& c) {
  if (!(c.step > 0.0)) throw BadInput("step must be positive");
  if (!(c.T > 0.0)) throw BadInput("T must be positive");
  if (!(c.geometry.parallel > 0.0 && c.geometry.zero >= 0.0 && c.geometry.rank > 0.0))
    throw BadInput("classifier tolerances must be positive");
  if (c.tolerance && !(*c.tolerance >= 0.0)) throw BadInput("tolerance must be nonnegative");
  try {
    integrator_from_string(c.method);
    make_hamiltonian(c.hamiltonian, c.params);
  } catch (const DomainError& e) {
    throw BadInput(e.what());
  }
  if (!c.suite.empty()) {
    const auto& names = verify::suite_names();
    if (std::find(names.begin(), names.end(), c.suite) == names.end())
      throw BadInput("unknown suite '" + c.suite + "'");
  }
  if (c.command != "verify" && c.input.empty()) throw BadInput(c.command + " needs --input");
  if (c.command == "section" && !c.reference_point)
    throw BadInput("section needs reference_point in the config");
}

// ------------------------------------------------------------------ input

struct Row {
  int line = 0;
  Eigen::VectorXd values;
};

struct Rows {
  std::vector<Row> rows;
  std::vector<json> errors;
};

/// Whitespace-separated reals, '#' starts a comment, blank lines are skipped.
/// Lines without exactly `width` finite reals are reported and skipped.
Rows read_rows(const std::string& path, int width, std::ostream& err) {
  std::ifstream in(path);
  if (!in) throw BadInput("cannot read input file '" + path + "'");
  Rows out;
  std::string text;
  for (int line = 1; std::getline(in, text); ++line) {
    if (const auto hash = text.find('#'); hash != std::string::npos) text.erase(hash);
    std::istringstream ss(text);
    std::vector<double> vals;
    std::string tok, problem;
    while (ss >> tok) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
        problem = "not a finite real: '" + tok + "'";
        break;
      }
      vals.push_back(v);
    }
    if (problem.empty() && vals.empty()) continue;
    if (problem.empty() && static_cast<int>(vals.size()) != width)
      problem = "expected " + std::to_string(width) + " reals, got " + std::to_string(vals.size());
    if (!problem.empty()) {
      err << path << ":" << line << ": " << problem << "\n";
      out.errors.push_back({{"line", line}, {"error", problem}});
      continue;
    }
    out.rows.push_back({line, Eigen::Map<Eigen::VectorXd>(vals.data(), width)});
  }
  return out;
}

// ------------------------------------------------------------------ output

template <typename Derived>
json arr(const Eigen::MatrixBase<Derived>& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json momentum_json(const MomentumValue& mu) { return {{"alpha", arr(mu.alpha)}, {"u", arr(mu.u)}}; }

json isotropy_json(const IsotropyClass& iso) {
  json j = {{"family", to_string(iso.family)}};
  if (iso.family == IsotropyFamily::G1 || iso.family == IsotropyFamily::G3) j["x"] = arr(iso.x);
  if (iso.family == IsotropyFamily::G2 || iso.family == IsotropyFamily::G3) j["y"] = arr(iso.ydir);
  return j;
}

json label_json(const OptimalLabel& rho) {
  const int k = rho.case_id;
  json j = {{"case", k}, {"group", case_info(k).group}, {"J", momentum_json(rho.mu)},
            {"isotropy", isotropy_json(rho.iso)}};
  if (k == 1 || k == 4 || k == 5) j["x0"] = arr(rho.x0);
  if (k >= 2 && k <= 5) j["y0"] = arr(rho.y0);
  if (k == 3 || k == 5 || k == 8 || k == 10) j["delta0"] = rho.delta0;
  if (k == 9 || k == 10) j["shift"] = arr(rho.shift);
  return j;
}

void emit(const RunConfig& c, const std::string& file, const std::string& text, std::ostream& out) {
  if (c.output.empty()) {
    out << text << "\n";
    return;
  }
  fs::create_directories(c.output);
  std::ofstream f(fs::path(c.output) / file);
  if (!f) throw std::runtime_error("cannot write " + (fs::path(c.output) / file).string());
  f << text << "\n";
}

void write_csv(const fs::path& path, const std::vector<std::string>& columns, const Trajectory& tr) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << "t";
  for (const auto& n : columns) f << "," << n;
  f << "\n" << std::setprecision(17);
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    f << tr.times[i];
    for (Eigen::Index k = 0; k < tr.states[i].size(); ++k) f << "," << tr.states[i](k);
    f << "\n";
  }
}

const std::vector<std::string> kPhaseColumns = {"q1x", "q1y", "q1z", "q2x", "q2y", "q2z",
                                                "p1x", "p1y", "p1z", "p2x", "p2y", "p2z"};

/// Exit status of a per-row command: bad input wins over numerical failure.
int status(const Rows& rows, bool numerical_failure) {
  if (!rows.errors.empty()) return kBadInput;
  return numerical_failure ? kNumericalFailure : kOk;
}

// ------------------------------------------------------------------ commands

int cmd_classify(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const Rows rows = read_rows(c.input, 12, err);
  json report = json::array();
  bool failed = false;
  for (const Row& r : rows.rows) {
    const PhasePoint m = PhasePoint::from_vector(r.values);
    json j = {{"line", r.line}, {"point", arr(r.values)}};
    try {
      j["fine_class"] = to_string(classify_fine(m, c.geometry));
      j["isotropy"] = isotropy_json(isotropy_class(m, c.geometry));
      j["J"] = momentum_json(momentum_map(m));
      j["regular"] = is_regular(m, c.geometry);
      j["char_dim"] = char_distribution_dim(m, c.geometry);
    } catch (const std::exception& e) {
      err << c.input << ":" << r.line << ": " << e.what() << "\n";
      j["error"] = e.what();
      failed = true;
    }
    report.push_back(j);
  }
  for (const json& e : rows.errors) report.push_back(e);
  emit(c, "classify.json", report.dump(2), out);
  return status(rows, failed);
}

int cmd_label(const RunConfig& c, bool reduce, std::ostream& out, std::ostream& err) {
  const Rows rows = read_rows(c.input, 12, err);
  json report = json::array();
  bool failed = false;
  for (const Row& r : rows.rows) {
    const PhasePoint m = PhasePoint::from_vector(r.values);
    json j = {{"line", r.line}};
    try {
      const OptimalLabel rho = label(m, c.geometry);
      j.update(label_json(rho));
      if (reduce) {
        const ReducedPoint pt = project(rho, m);
        const auto names = coordinate_names(rho.case_id);
        for (std::size_t i = 0; i < names.size(); ++i) j[names[i]] = pt.x(static_cast<Eigen::Index>(i));
        j["reduced"] = arr(pt.x);
      }
    } catch (const std::exception& e) {
      err << c.input << ":" << r.line << ": " << e.what() << "\n";
      j["error"] = e.what();
      failed = true;
    }
    report.push_back(j);
  }
  for (const json& e : rows.errors) report.push_back(e);
  emit(c, reduce ? "reduce.json" : "label.json", report.dump(2), out);
  return status(rows, failed);
}

int cmd_section(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const PhasePoint ref = PhasePoint::from_vector(*c.reference_point);
  OptimalLabel rho;
  try {
    rho = label(ref, c.geometry);
  } catch (const std::exception& e) {
    throw BadInput(std::string("reference_point: ") + e.what());
  }
  const int dim = reduced_dimension(rho.case_id);
  Rows rows = read_rows(c.input, dim, err);
  json points = json::array();
  for (const Row& r : rows.rows) {
    json j = {{"line", r.line}, {"reduced", arr(r.values)}};
    try {
      j["point"] = arr(section(rho, {rho.case_id, r.values}).vector());
    } catch (const DomainError& e) {
      err << c.input << ":" << r.line << ": " << e.what() << "\n";
      j["error"] = e.what();
      rows.errors.push_back({{"line", r.line}, {"error", e.what()}});
    }
    points.push_back(j);
  }
  json report = {{"label", label_json(rho)}, {"coordinates", coordinate_names(rho.case_id)},
                 {"points", points}};
  emit(c, "section.json", report.dump(2), out);
  return status(rows, false);
}

int cmd_simulate(RunConfig c, std::ostream& out, std::ostream& err) {
  if (c.output.empty()) c.output = ".";
  fs::create_directories(c.output);
  const Rows rows = read_rows(c.input, 12, err);
  const HamiltonianSpec H = make_hamiltonian(c.hamiltonian, c.params);
  const Integrator method = integrator_from_string(c.method);
  json runs = json::array();
  bool failed = false;
  int index = 0;
  for (const Row& r : rows.rows) {
    const PhasePoint m0 = PhasePoint::from_vector(r.values);
    const std::string stem = "traj_" + std::to_string(index++);
    json j = {{"line", r.line}};
    try {
      const OptimalLabel rho = label(m0, c.geometry);
      j["case"] = rho.case_id;
      try {
        const CommutationResult res = commutation_run(rho, H, m0, c.T, c.step, method);
        write_csv(fs::path(c.output) / (stem + "_full.csv"), kPhaseColumns, res.full);
        write_csv(fs::path(c.output) / (stem + "_reduced.csv"), coordinate_names(rho.case_id), res.reduced);
        const ConservationReport cons = conservation_report(H, res.full);
        const ReducedFunction Hr = reduced_hamiltonian(rho, H);
        double dHr = 0.0;
        for (const auto& x : res.reduced.states) dHr = std::max(dHr, std::abs(Hr(x) - Hr(res.reduced.states.front())));
        j["full_csv"] = stem + "_full.csv";
        j["reduced_csv"] = stem + "_reduced.csv";
        j["commutation_error"] = res.error;
        j["energy_drift"] = cons.dH;
        j["momentum_drift"] = cons.dJ;
        j["reduced_energy_drift"] = dHr;
      } catch (const ChartEscape& e) {
        // Keep what can still be computed: the full trajectory.
        const VectorField f = [&H](double, const Eigen::VectorXd& y) -> Eigen::VectorXd {
          return hamiltonian_vector_field(H, PhasePoint::from_vector(y));
        };
        const Trajectory full = integrate(f, m0.vector(), 0.0, c.T, c.step, method);
        write_csv(fs::path(c.output) / (stem + "_full.csv"), kPhaseColumns, full);
        j["full_csv"] = stem + "_full.csv";
        j["error"] = e.what();
        j["exit_time"] = e.exit_time;
        err << c.input << ":" << r.line << ": " << e.what() << "\n";
        failed = true;
      }
    } catch (const std::exception& e) {
      err << c.input << ":" << r.line << ": " << e.what() << "\n";
      j["error"] = e.what();
      failed = true;
    }
    runs.push_back(j);
  }
  for (const json& e : rows.errors) runs.push_back(e);
  const json summary = {{"hamiltonian", H.name},
                        {"params", {{"m1", c.params.m1}, {"m2", c.params.m2}, {"G", c.params.G}, {"c", c.params.c}}},
                        {"method", to_string(method)},
                        {"step", c.step},
                        {"T", c.T},
                        {"runs", runs}};
  std::ofstream(fs::path(c.output) / "simulate.json") << summary.dump(2) << "\n";
  out << summary.dump(2) << "\n";
  return status(rows, failed);
}

int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
  verify::Options opts;
  opts.seed = c.seed;
  opts.tolerance = c.tolerance;
  std::vector<verify::SuiteResult> results;
  bool pass = true;
  for (const std::string& name : verify::suite_names()) {
    if (!c.suite.empty() && name != c.suite) continue;
    results.push_back(verify::run_suite(name, opts));
    const auto& r = results.back();
    err << (r.pass ? "PASS " : "FAIL ") << r.criterion << " " << r.name << "\n";
    pass = pass && r.pass;
  }
  emit(c, "verify.json", verify::to_json(results, opts), out);
  return pass ? kOk : kVerificationFailure;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal reduction of the two-body problem with SE(3) symmetry", "optred2bp"};
  std::string command, config_path, input, output, hamiltonian, suite, method;
  std::optional<std::uint64_t> seed;
  std::optional<double> step, T, tolerance;
  app.add_option("command", command, "classify | label | reduce | section | simulate | verify")
      ->required()
      ->check(CLI::IsMember({"classify", "label", "reduce", "section", "simulate", "verify"}));
  app.add_option("--config", config_path, "JSON config file (flags override it)");
  app.add_option("--input", input, "phase points, 12 reals per line ('#' comments)");
  app.add_option("--output", output, "output directory (default: stdout, '.' for simulate)");
  app.add_option("--seed", seed, "seed of the verification suites");
  app.add_option("--step", step, "integrator step");
  app.add_option("--T", T, "integration time");
  app.add_option("--hamiltonian", hamiltonian, "free | kepler | pn1");
  app.add_option("--method", method, "rk4 | implicit_midpoint");
  app.add_option("--suite", suite, "run a single verification suite");
  app.add_option("--tolerance", tolerance, "replace every numeric threshold of the suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "optred2bp: " << e.what() << "\n";
    return kBadInput;
  }

  try {
    RunConfig c;
    c.command = command;
    if (!config_path.empty()) load_config(config_path, c);
    if (!input.empty()) c.input = input;
    if (!output.empty()) c.output = output;
    if (seed) c.seed = *seed;
    if (step) c.step = *step;
    if (T) c.T = *T;
    if (!hamiltonian.empty()) c.hamiltonian = hamiltonian;
    if (!method.empty()) c.method = method;
    if (!suite.empty()) c.suite = suite;
    if (tolerance) c.tolerance = tolerance;
    validate(c);

    if (command == "classify") return cmd_classify(c, out, err);
    if (command == "label") return cmd_label(c, false, out, err);
    if (command == "reduce") return cmd_label(c, true, out, err);
    if (command == "section") return cmd_section(c, out, err);
    if (command == "simulate") return cmd_simulate(c, out, err);
    return cmd_verify(c, out, err);
  } catch (const BadInput& e) {
    err << "optred2bp: " << e.what() << "\n";
    return kBadInput;
  } catch (const DomainError& e) {
    err << "optred2bp: " << e.what() << "\n";
    return kBadInput;
  } catch (const std::exception& e) {
    err << "optred2bp: " << e.what() << "\n";
    return kNumericalFailure;
  }
}

}  // namespace optred::cli
