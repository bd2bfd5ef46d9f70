#include <doctest.h>
#include <json.hpp>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "optred/optimal.hpp"

using json = nlohmann::json;
namespace fs = std::filesystem;
using namespace optred;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "optred2bp");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("optred_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
    return (path / name).string();
  }
};

std::string row(const PhasePoint& m) {
  std::ostringstream s;
  s << std::setprecision(17);
  const Vec12d v = m.vector();
  for (int i = 0; i < 12; ++i) s << (i ? " " : "") << v(i);
  return s.str() + "\n";
}

std::vector<std::vector<double>> read_csv(const fs::path& p, std::string& header) {
  std::ifstream in(p);
  std::getline(in, header);
  std::vector<std::vector<double>> rows;
  for (std::string line; std::getline(in, line);) {
    std::vector<double> r;
    std::istringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) r.push_back(std::stod(cell));
    rows.push_back(r);
  }
  return rows;
}

}  // namespace

TEST_CASE("classify") {
  TempDir dir;
  const std::string in = dir.write("points.txt",
                                   "# two points\n"
                                   "1 2 3 -1 0 2 1 0 0 0 1 0\n"
                                   "\n"
                                   "1 1 1 1 1 1 0 0 0 0 0 0   # coincident at rest\n");
  const Result r = run_cli({"classify", "--input", in});
  CHECK(r.code == cli::kOk);
  const json j = json::parse(r.out);
  REQUIRE(j.size() == 2);
  CHECK(j[0]["line"] == 2);
  CHECK(j[0]["fine_class"] == "a13");
  CHECK(j[0]["isotropy"]["family"] == "G4");
  CHECK(j[0]["regular"] == true);
  CHECK(j[0]["char_dim"] == 6);
  CHECK(j[1]["line"] == 4);
  CHECK(j[1]["fine_class"] == "a1");
  CHECK(j[1]["char_dim"] == 0);
  CHECK(j[1]["isotropy"]["x"] == json::array({1.0, 1.0, 1.0}));
  CHECK(j[1]["J"]["u"] == json::array({0.0, 0.0, 0.0}));

  const Result empty = run_cli({"classify", "--input", dir.write("empty.txt", "")});
  CHECK(empty.code == cli::kOk);
  CHECK(json::parse(empty.out).empty());

  const Result bad = run_cli({"classify", "--input", dir.write("bad.txt", "1 2 3\n1 2 3 -1 0 2 1 0 0 0 1 0\n1 2 x 4\n")});
  CHECK(bad.code == cli::kBadInput);
  CHECK(bad.err.find("bad.txt:1:") != std::string::npos);
  CHECK(bad.err.find("bad.txt:3:") != std::string::npos);
  const json jb = json::parse(bad.out);
  CHECK(jb.size() == 3);
  CHECK(jb[0]["line"] == 2);
  CHECK(jb[1]["line"] == 1);
  CHECK(jb[1].contains("error"));
}

TEST_CASE("reduce reports the label and the reduced coordinates") {
  TempDir dir;
  const OptimalLabel rho7 = make_case7(Vec3d(0, 0, 1.5));
  const PhasePoint m7 = section(rho7, ReducedPoint::generic(7, 0.7, 1.1, -0.3, 0.2));
  const std::string in = dir.write("p.txt", "0 0 0.5 0 0 1 0 0 0.5 0 0 0.5\n" + row(m7) + "2 2 2 2 2 2 0 0 0 0 0 0\n");
  const Result r = run_cli({"reduce", "--input", in});
  CHECK(r.code == cli::kOk);
  const json j = json::parse(r.out);
  REQUIRE(j.size() == 3);

  CHECK(j[0]["case"] == 3);
  CHECK(j[0]["group"] == case_info(3).group);
  CHECK(j[0]["delta0"].get<double>() == doctest::Approx(1.0));
  CHECK(j[0].contains("delta"));
  CHECK(j[0].contains("gamma"));
  CHECK(j[0]["reduced"].size() == 2);

  CHECK(j[1]["case"] == 7);
  CHECK(j[1]["nu"].get<double>() == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(j[1]["r"].get<double>() == doctest::Approx(1.1).epsilon(1e-12));
  CHECK(j[1]["mu"].get<double>() == doctest::Approx(-0.3).epsilon(1e-12));
  CHECK(j[1]["lambda"].get<double>() == doctest::Approx(0.2).epsilon(1e-12));

  CHECK(j[2]["case"] == 1);
  CHECK(j[2]["x0"] == json::array({2.0, 2.0, 2.0}));
  CHECK(j[2]["reduced"].empty());

  const Result l = run_cli({"label", "--input", in});
  CHECK(l.code == cli::kOk);
  CHECK_FALSE(json::parse(l.out)[1].contains("reduced"));
}

TEST_CASE("section") {
  TempDir dir;
  const std::string cfg = dir.write("cfg.json", R"({"reference_point": [0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0]})");
  const std::string in = dir.write("x.txt", "0 1 0 0.5\n0.3 -1 0 0\n");
  const Result r = run_cli({"section", "--config", cfg, "--input", in});
  CHECK(r.code == cli::kBadInput);  // r = -1 is outside the section's domain
  const json j = json::parse(r.out);
  CHECK(j["label"]["case"] == 7);
  CHECK(j["coordinates"] == json::array({"nu", "r", "mu", "lambda"}));
  REQUIRE(j["points"].size() == 2);
  const auto p = j["points"][0]["point"].get<std::vector<double>>();
  const PhasePoint expected = section(make_case7(Vec3d(0, 0, 1)), ReducedPoint::generic(7, 0, 1, 0, 0.5));
  for (int i = 0; i < 12; ++i) CHECK(p[i] == doctest::Approx(expected.vector()(i)));
  CHECK(j["points"][1].contains("error"));

  CHECK(run_cli({"section", "--input", in}).code == cli::kBadInput);
}

TEST_CASE("simulate") {
  TempDir dir;
  const OptimalLabel rho = make_case7(Vec3d(0, 0, 1));
  const PhasePoint circ = section(rho, ReducedPoint::generic(7, M_PI / 2, std::sqrt(0.5), 1.0, 0.5));
  const PhasePoint gen = section(rho, ReducedPoint::generic(7, 0.3, 1.2, 0.5, 0.4));
  const std::string in = dir.write("m.txt", row(gen));
  const std::string out = (dir.path / "free").string();

  const Result f = run_cli({"simulate", "--input", in, "--output", out, "--T", "1", "--step", "1e-3"});
  CHECK(f.code == cli::kOk);
  const json jf = json::parse(f.out);
  CHECK(jf == json::parse(std::ifstream(fs::path(out) / "simulate.json")));
  CHECK(jf["hamiltonian"] == "free");
  CHECK(jf["runs"][0]["case"] == 7);
  CHECK(jf["runs"][0]["commutation_error"].get<double>() <= 1e-6);

  std::string header;
  const auto full = read_csv(fs::path(out) / "traj_0_full.csv", header);
  CHECK(header == "t,q1x,q1y,q1z,q2x,q2y,q2z,p1x,p1y,p1z,p2x,p2y,p2z");
  CHECK(full.size() == 1001);
  const auto red = read_csv(fs::path(out) / "traj_0_reduced.csv", header);
  CHECK(header == "t,nu,r,mu,lambda");
  REQUIRE(red.size() == 1001);
  // free flow: mu grows linearly at rate 1 - 2 lambda
  for (const auto& rr : red) CHECK(rr[3] == doctest::Approx(0.5 + (1 - 2 * 0.4) * rr[0]).epsilon(1e-8));

  const Result k = run_cli({"simulate", "--input", dir.write("c.txt", row(circ)), "--output",
                            (dir.path / "kepler").string(), "--hamiltonian", "kepler"});
  CHECK(k.code == cli::kOk);
  const json jk = json::parse(k.out)["runs"][0];
  CHECK(jk["energy_drift"].get<double>() <= 1e-8);
  CHECK(jk["momentum_drift"].get<double>() <= 1e-8);
  CHECK(jk["commutation_error"].get<double>() <= 1e-4);

  CHECK(run_cli({"simulate", "--input", in, "--step", "-1"}).code == cli::kBadInput);
  CHECK(run_cli({"simulate", "--input", in, "--hamiltonian", "yukawa"}).code == cli::kBadInput);
  CHECK(run_cli({"simulate", "--input", in, "--method", "euler"}).code == cli::kBadInput);
}

TEST_CASE("verify") {
  const Result ok = run_cli({"verify", "--suite", "closed_form"});
  CHECK(ok.code == cli::kOk);
  CHECK(ok.err.find("PASS 9 closed_form") != std::string::npos);
  const json j = json::parse(ok.out);
  CHECK(j["pass"] == true);
  CHECK(j["suites"].size() == 1);
  CHECK(j["suites"][0]["criterion"] == 9);

  const Result strict = run_cli({"verify", "--suite", "closed_form", "--tolerance", "1e-300"});
  CHECK(strict.code == cli::kVerificationFailure);
  CHECK(json::parse(strict.out)["pass"] == false);

  // same seed, same bytes
  CHECK(run_cli({"verify", "--suite", "equivariance", "--seed", "7"}).out ==
        run_cli({"verify", "--suite", "equivariance", "--seed", "7"}).out);

  CHECK(run_cli({"verify", "--suite", "nonsense"}).code == cli::kBadInput);
}

TEST_CASE("configuration and argument errors") {
  TempDir dir;
  const std::string in = dir.write("p.txt", "1 2 3 -1 0 2 1 0 0 0 1 0\n");
  CHECK(run_cli({"classify", "--config", dir.write("a.json", R"({"inptu": "x"})")}).code == cli::kBadInput);
  CHECK(run_cli({"classify", "--config", dir.write("b.json", "{not json")}).code == cli::kBadInput);
  CHECK(run_cli({"classify", "--config", (dir.path / "missing.json").string()}).code == cli::kBadInput);
  CHECK(run_cli({"classify", "--input", (dir.path / "missing.txt").string()}).code == cli::kBadInput);
  CHECK(run_cli({"classify"}).code == cli::kBadInput);
  CHECK(run_cli({"frobnicate"}).code == cli::kBadInput);
  CHECK(run_cli({"classify", "--input", in, "--bogus"}).code == cli::kBadInput);

  // config supplies the input; the flag overrides the output
  const std::string cfg = dir.write("c.json", "{\"input\": \"" + in + "\", \"output\": \"/nonexistent/x\"}");
  const Result r = run_cli({"classify", "--config", cfg, "--output", (dir.path / "o").string()});
  CHECK(r.code == cli::kOk);
  CHECK(fs::exists(dir.path / "o" / "classify.json"));

  const std::string a = run_cli({"classify", "--input", in}).out, b = run_cli({"classify", "--input", in}).out;
  CHECK(a == b);

  const Result help = run_cli({"--help"});
  CHECK(help.code == cli::kOk);
  CHECK(help.out.find("simulate") != std::string::npos);
}
