#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

// End-to-end checks through the real binary: exit codes, report files,
// format switches, and thread-count determinism of the written artifact.

namespace {

const std::string kCli = ANSCOMBE_CLI_PATH;
const std::string kConfigs = ANSCOMBE_CONFIG_DIR;

int run(const std::string& args) {
  const std::string cmd = kCli + " " + args + " >/dev/null 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool exists(const std::string& path) { return std::ifstream(path).good(); }

}  // namespace

TEST_CASE("estimate writes a report and exits zero") {
  const std::string out = "/tmp/anscombe_cli_estimate.json";
  std::remove(out.c_str());
  CHECK(run("estimate --config " + kConfigs + "/two_point_estimate.json --samples 2000 --out " +
            out) == 0);
  REQUIRE(exists(out));
  const std::string text = slurp(out);
  CHECK(text.find("\"command\": \"estimate\"") != std::string::npos);
  CHECK(text.find("lambda_p_infimum") != std::string::npos);
}

TEST_CASE("verify on the degenerate scenario passes") {
  CHECK(run("verify --config " + kConfigs + "/degenerate_verify.json") == 0);
}

TEST_CASE("compare and oracle run on the enumerable scenario") {
  CHECK(run("compare --config " + kConfigs + "/alternating_compare.json --samples 20000") == 0);
  const std::string out = "/tmp/anscombe_cli_oracle.json";
  std::remove(out.c_str());
  CHECK(run("oracle --config " + kConfigs + "/alternating_compare.json --out " + out) == 0);
  const std::string text = slurp(out);
  CHECK(text.find("\"five_forms\"") != std::string::npos);
}

TEST_CASE("csv format is honored") {
  const std::string out = "/tmp/anscombe_cli_estimate.csv";
  std::remove(out.c_str());
  CHECK(run("estimate --config " + kConfigs + "/two_point_estimate.json --samples 1000 "
            "--format csv --out " + out) == 0);
  const std::string text = slurp(out);
  CHECK(text.rfind("quantity,epsilon,delta,alpha,n,value,stderr", 0) == 0);
}

TEST_CASE("config errors exit 2 and write nothing") {
  const std::string bad = "/tmp/anscombe_bad_config.json";
  {
    std::ofstream out(bad);
    out << R"({"samples": 7, "epsilonn_grid": [0.5]})";
  }
  const std::string report = "/tmp/anscombe_bad_report.json";
  std::remove(report.c_str());
  CHECK(run("estimate --config " + bad + " --out " + report) == 2);
  CHECK_FALSE(exists(report));
  CHECK(run("estimate --config /nonexistent/nope.json") == 2);
}

TEST_CASE("seed override changes the draw, fixed seed reproduces it") {
  const std::string a = "/tmp/anscombe_seed_a.json";
  const std::string b = "/tmp/anscombe_seed_b.json";
  const std::string base = " --config " + kConfigs + "/alternating_compare.json --samples 2000 ";
  CHECK(run("estimate" + base + "--seed 5 --out " + a) == 0);
  CHECK(run("estimate" + base + "--seed 5 --out " + b) == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(run("estimate" + base + "--seed 6 --out " + b) == 0);
  CHECK(slurp(a) != slurp(b));
}

TEST_CASE("verify reports are byte-identical across thread counts") {
  const std::string base = " --config " + kConfigs + "/clt_verify.json --samples 4000 ";
  const std::string t1 = "/tmp/anscombe_threads_1.json";
  const std::string t2 = "/tmp/anscombe_threads_2.json";
  const std::string t8 = "/tmp/anscombe_threads_8.json";
  CHECK(run("verify" + base + "--threads 1 --out " + t1) == 0);
  CHECK(run("verify" + base + "--threads 2 --out " + t2) == 0);
  CHECK(run("verify" + base + "--threads 8 --out " + t8) == 0);
  const std::string ref = slurp(t1);
  REQUIRE_FALSE(ref.empty());
  CHECK(slurp(t2) == ref);
  CHECK(slurp(t8) == ref);
}
