#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "core/io.hpp"
#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kTmp = QED_TEST_TMP;

int run(const std::string& args, const std::string& env = "") {
  fs::create_directories(kTmp);
  const std::string cmd = env + " " + QED_CLI_PATH + " " + args + " 2>" +
                          (kTmp / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string out(const char* name) { return (kTmp / name).string(); }

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("verify on defaults exits 0 and writes a passing report") {
  REQUIRE(run("verify -o " + out("report.json")) == 0);
  const auto j = nlohmann::json::parse(slurp(out("report.json")));
  CHECK(j["schema"] == 1);
  CHECK(j["all_pass"] == true);
  CHECK(j["spec"]["type"] == "ii");
  CHECK(j["spec"]["omega"] == 1.0);
  CHECK(j["spec"]["omega_prime_imag"] == 2.0);
  CHECK(j["spec"]["epsilon"] == 0.5);
  CHECK(j["spec"]["samples_per_side"] == 1024);
}

TEST_CASE("an injected error makes verify exit nonzero") {
  CHECK(run("verify --inject-error -o " + out("bad.json")) == 1);
  const auto j = nlohmann::json::parse(slurp(out("bad.json")));
  CHECK(j["all_pass"] == false);
  CHECK(j["summary"]["failed"] == 1);
}

TEST_CASE("Type II plot: two bubbles over two periods, deterministic") {
  REQUIRE(run("plot --type ii --omega 1 --omega-prime 2 --epsilon 0.5 -o " + out("fig2.svg")) == 0);
  const std::string svg = slurp(out("fig2.svg"));
  CHECK(svg.rfind("<svg xmlns", 0) == 0);
  CHECK(count(svg, "<path") == 4);
  CHECK(svg.find("bubble_0_p1") != std::string::npos);
  REQUIRE(run("plot -o " + out("fig2b.svg"), "QED_THREADS=1") == 0);
  CHECK(slurp(out("fig2b.svg")) == svg);
}

TEST_CASE("Type I plot as CSV round-trips") {
  REQUIRE(run("plot --type i --omega 1 --omega-prime 2 --format csv -o " + out("fig1.csv")) == 0);
  std::ifstream f(out("fig1.csv"));
  const auto curves = qed::parse_curves_csv(f);
  int closed = 0, arcs = 0;
  for (const auto& c : curves) {
    if (c.id == "top_closed") {
      ++closed;
      CHECK(c.points.front() == c.points.back());
    } else {
      ++arcs;
    }
  }
  CHECK(closed == 1);
  CHECK(arcs >= 2);
}

TEST_CASE("build, flow and kernel-selftest") {
  REQUIRE(run("build --type ii --omega-prime 1.5 --epsilon 0.4 -o " + out("fig3.json")) == 0);
  const auto b = nlohmann::json::parse(slurp(out("fig3.json")));
  CHECK(b["report"] == "build");
  CHECK(b["trace"]["topology"].get<std::string>().find("2 closed") != std::string::npos);
  REQUIRE(run("flow --levels 5 --format json -o " + out("flow.json")) == 0);
  const auto fl = nlohmann::json::parse(slurp(out("flow.json")));
  CHECK(fl["levels"].size() == 5);
  REQUIRE(run("flow --levels 5 -o " + out("flow.svg")) == 0);
  CHECK(slurp(out("flow.svg")).rfind("<svg", 0) == 0);
  REQUIRE(run("kernel-selftest -o " + out("kernel.json")) == 0);
  CHECK(nlohmann::json::parse(slurp(out("kernel.json")))["all_pass"] == true);
}

TEST_CASE("invalid combinations exit with status 2 and name the constraint") {
  CHECK(run("plot --type i --epsilon 0.3 -o " + out("x.svg")) == 2);
  CHECK(slurp(kTmp / "stderr.txt").find("Type II") != std::string::npos);
  CHECK(run("verify --epsilon 1.2 -o " + out("x.json")) == 2);
  CHECK(slurp(kTmp / "stderr.txt").find("epsilon") != std::string::npos);
  CHECK(run("plot --type iii") == 2);
  CHECK(run("") == 2);
  CHECK(run("flow --type i -o " + out("x.svg")) == 2);
  CHECK(run("plot -o /nonexistent-dir/x.svg") == 3);
}
