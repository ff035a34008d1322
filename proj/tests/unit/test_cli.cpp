#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>
#include <json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int status;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "oqe-cli");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = oqe::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "oqe_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("spectrum on the sphere quotient n = 3, l_max = 30") {
  const auto r = run({"spectrum", "--sphere-n", "3", "--l-max", "30"});
  REQUIRE(r.status == 0);
  const auto ls = lines(r.out);
  CHECK(ls.front() == "index,lambda,laplace_eigenvalue");
  CHECK(ls.size() == 1 + 321);
  CHECK(ls[1] == "0,0,0");
  CHECK(r.err.empty());
}

TEST_CASE("weyl on the pillowcase as JSON") {
  const auto r = run({"weyl", "--lambda", "200", "--format", "json"});
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.contains("config"));
  CHECK(j.contains("results"));
  CHECK(j["version"] == oqe::cli::kVersion);
  CHECK(j["config"]["backend"] == "pillowcase");
  const double C = j["results"][0]["C"];
  CHECK(std::abs(C / (M_PI / 2) - 1) <= 0.03);
}

TEST_CASE("output schemas") {
  const std::vector<std::pair<std::vector<std::string>, std::string>> cases = {
      {{"weyl", "--sphere-n", "2"}, "C,predicted,relative_error,exponent,points,lambda_low,lambda_high"},
      {{"local-weyl", "--sphere-n", "2"},
       "observable,omega,C,predicted,relative_error,exponent,points,lambda_low,lambda_high"},
      {{"pointwise-weyl", "--sphere-n", "2"}, "point,theta,phi,lambda,measured,predicted,ratio,count"},
      {{"qe", "--lambda", "30"}, "observable,lambda,count,variance,excluded_fraction"},
      {{"defect", "--sphere-n", "1", "--lambda", "20"}, "observable,lambda,norm,ratio,count,largest_block"},
      {{"egorov"}, "m1,m2,k_min,k_max,mismatch"},
      {{"geodesic", "--T", "2"}, "step,t,x1,x2,direction"},
      {{"birkhoff", "--T", "50"}, "observable,T,dt,x1,x2,direction,average"},
      {{"lyapunov", "--T", "100"}, "exponent,half_width,T,renormalizations"},
      {{"ergodicity", "--T", "20", "--n-starts", "4"}, "observable,T,n_starts,mean,variance,liouville_reference"},
      {{"zeta", "--lambda", "150"}, "observable,residue,uncertainty,sign,tail_C,two_C,residue_trace"},
      {{"report", "--criteria", "8"}, "criterion,name,pass,detail"},
  };
  for (const auto& [args, header] : cases) {
    const auto r = run(args);
    CAPTURE(args[0]);
    CAPTURE(r.err);
    CHECK(r.status == 0);
    const auto ls = lines(r.out);
    REQUIRE(!ls.empty());
    CHECK(ls.front() == header);
    CHECK(ls.size() >= 2);
  }
}

TEST_CASE("seeded commands are byte-identical across runs") {
  const std::vector<std::string> args = {"ergodicity", "--triangle", "2,3,7", "--T", "200", "--n-starts", "6",
                                         "--seed", "42"};
  const auto a = run(args), b = run(args);
  CHECK(a.status == 0);
  CHECK(a.out == b.out);
  auto other = args;
  other.back() = "43";
  CHECK(run(other).out != a.out);

  const auto f1 = scratch("geo1.json"), f2 = scratch("geo2.json");
  for (const auto& f : {f1, f2})
    CHECK(run({"geodesic", "--triangle", "2,3,7", "--seed", "7", "--T", "20", "--format", "json", "--out", f.string()})
              .status == 0);
  CHECK(!slurp(f1).empty());
  CHECK(slurp(f1) == slurp(f2));
}

TEST_CASE("configuration file, overridden by flags") {
  const auto cfg = scratch("run.cfg");
  {
    std::ofstream out(cfg);
    out << "sphere-n=3\nl-max=10\nformat=csv\n";
  }
  const auto from_file = run({"spectrum", "--config", cfg.string()});
  const auto direct = run({"spectrum", "--sphere-n", "3", "--l-max", "10"});
  REQUIRE(from_file.status == 0);
  CHECK(from_file.out == direct.out);
  const auto overridden = run({"spectrum", "--config", cfg.string(), "--l-max", "5"});
  CHECK(overridden.out == run({"spectrum", "--sphere-n", "3", "--l-max", "5"}).out);
}

TEST_CASE("invalid configurations: single-line error, nonzero exit") {
  const std::vector<std::vector<std::string>> bad = {
      {"spectrum", "--format", "xml"},
      {"spectrum", "--triangle", "2,3"},
      {"spectrum", "--triangle", "2,x,7"},
      {"spectrum", "--sphere-n", "2", "--triangle", "2,3,7"},
      {"spectrum", "--nonsense", "1"},
      {"qe", "--eps", "-1"},
      {"ergodicity", "--n-starts", "1"},
      {"egorov", "--m", "1"},
      {"report", "--criteria", "12"},
      {"spectrum", "--config", "/nonexistent/run.cfg"},
      {},
  };
  for (const auto& args : bad) {
    const auto r = run(args);
    CAPTURE(r.err);
    CHECK(r.status == 2);
    const auto ls = lines(r.err);
    REQUIRE(ls.size() == 1);
    CHECK(ls[0].rfind("error kind=ConfigError message=", 0) == 0);
    CHECK(r.out.empty());
  }
  // numeric and backend failures surface the module diagnostic
  const auto z = run({"zeta", "--triangle", "2,3,7", "--k", "10", "--refine", "1"});
  CHECK(z.status == 3);
  CHECK(z.err.rfind("error kind=UnsupportedBackend", 0) == 0);
  const auto e = run({"spectrum", "--triangle", "2,3,6"});
  CHECK(e.status == 3);
  CHECK(lines(e.err).size() == 1);
}

TEST_CASE("mesh files round-trip through the CLI") {
  const auto m1 = scratch("t1.mesh"), m2 = scratch("t2.mesh");
  const auto a = run({"spectrum", "--triangle", "2,3,7", "--refine", "1", "--k", "12", "--mesh-out", m1.string()});
  REQUIRE(a.status == 0);
  CHECK(slurp(m1).rfind("mesh v=", 0) == 0);
  const auto b = run({"spectrum", "--triangle", "2,3,7", "--k", "12", "--mesh-in", m1.string()});
  REQUIRE(b.status == 0);
  CHECK(a.out == b.out);
  CHECK(run({"spectrum", "--triangle", "2,3,7", "--refine", "1", "--k", "12", "--mesh-out", m2.string()}).status == 0);
  CHECK(slurp(m1) == slurp(m2));
}

TEST_CASE("reals are written with 17 significant digits") {
  CHECK(oqe::cli::format_double(0.1) == "0.10000000000000001");
  CHECK(oqe::cli::format_double(2.0) == "2");
  for (double v : {M_PI, 1e-300, -123456.789, 6.02214076e23})
    CHECK(std::strtod(oqe::cli::format_double(v).c_str(), nullptr) == v);
}

TEST_CASE("the executable writes identical bytes on repeated runs") {
  const std::string exe = OQE_CLI_PATH;
  const auto f1 = scratch("exe1.csv"), f2 = scratch("exe2.csv");
  for (const auto& f : {f1, f2}) {
    const std::string cmd = exe + " birkhoff --triangle 2,3,7 --T 100 --seed 9 --out " + f.string();
    CHECK(std::system(cmd.c_str()) == 0);
  }
  CHECK(slurp(f1) == slurp(f2));
  CHECK(lines(slurp(f1)).size() == 2);
  CHECK(std::system((exe + " spectrum --format xml 2>/dev/null").c_str()) != 0);
}
