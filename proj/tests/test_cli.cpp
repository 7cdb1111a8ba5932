#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "siegel/cli_app.hpp"

namespace {

int run_cli(const std::vector<std::string>& args) {
  std::vector<std::string> storage = args;
  storage.insert(storage.begin(), "siegel-lab");
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  return siegel::cli_main(int(argv.size()), argv.data());
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("usage errors exit with code 2") {
  CHECK(run_cli({}) == 2);
  CHECK(run_cli({"no-such-command"}) == 2);
  CHECK(run_cli({"eisenstein-eval", "--k", "3", "--out", "/dev/null"}) == 2);
  CHECK(run_cli({"eisenstein-eval", "--k", "10", "--unknown-flag"}) == 2);
  CHECK(run_cli({"lift-kernel", "--k", "6", "--t", "1,0,-1", "--out", "/dev/null"}) == 2);
  CHECK(run_cli({"lee-socle", "--k", "3", "--out", "/dev/null"}) == 2);
}

TEST_CASE("covariance command passes and fails as configured") {
  CHECK(run_cli({"verify-covariance", "--gammas", "6", "--taus", "3", "--seed", "3",
                 "--out", "/tmp/siegel_vc_test.json"}) == 0);
  // forcing the tolerance to zero must fail: floats are not exact
  CHECK(run_cli({"verify-covariance", "--gammas", "4", "--taus", "2", "--seed", "3",
                 "--tol", "0", "--out", "/tmp/siegel_vc_test0.json"}) == 1);
}

TEST_CASE("reports are byte-identical across seeds-fixed reruns and job counts") {
  std::string a = "/tmp/siegel_cli_a.json", b = "/tmp/siegel_cli_b.json";
  CHECK(run_cli({"lee-socle", "--k", "6", "--window", "12", "--jobs", "1", "--out", a}) == 0);
  CHECK(run_cli({"lee-socle", "--k", "6", "--window", "12", "--jobs", "3", "--out", b}) == 0);
  CHECK(slurp(a) == slurp(b));

  std::string c = "/tmp/siegel_cli_c.csv", d = "/tmp/siegel_cli_d.csv";
  CHECK(run_cli({"fourier-extract", "--k", "10", "--height-bound", "1", "--t", "1,0,-1",
                 "--y-scale", "1,2", "--format", "csv", "--jobs", "1", "--out", c}) == 0);
  CHECK(run_cli({"fourier-extract", "--k", "10", "--height-bound", "1", "--t", "1,0,-1",
                 "--y-scale", "1,2", "--format", "csv", "--jobs", "4", "--out", d}) == 0);
  CHECK(slurp(c) == slurp(d));

  std::string e = "/tmp/siegel_cli_e.svg", f = "/tmp/siegel_cli_f.svg";
  CHECK(run_cli({"ktype-diagram", "--kind", "lee", "--k", "4", "--window", "5",
                 "--format", "svg", "--out", e}) == 0);
  CHECK(run_cli({"ktype-diagram", "--kind", "lee", "--k", "4", "--window", "5",
                 "--format", "svg", "--out", f}) == 0);
  CHECK(slurp(e) == slurp(f));
}

TEST_CASE("skew flag reports the relation residual") {
  std::string p = "/tmp/siegel_cli_skew.json";
  CHECK(run_cli({"eisenstein-eval", "--k", "10", "--height-bound", "1", "--skew",
                 "--tau", "0.2,0.1,-0.1,1.2,0.2,0.9", "--out", p}) == 0);
  std::string body = slurp(p);
  CHECK(body.find("skew_relation_residual") != std::string::npos);
}
