#include <set>

#include "core/verify.hpp"
#include "doctest.h"
#include "json.hpp"

using qed::CheckRecord;

namespace {

const qed::ConstructedMap& fig(int which) {
  static const qed::ConstructedMap m1 = [] {
    qed::DomainSpec s;
    s.kind = qed::DomainKind::TypeI;
    s.epsilon.reset();
    return qed::build_map(s);
  }();
  static const qed::ConstructedMap m2 = qed::build_map(qed::DomainSpec{});
  return which == 1 ? m1 : m2;
}

const CheckRecord& find(const qed::VerificationReport& r, const std::string& name) {
  for (const auto& c : r.checks) {
    if (c.name == name) return c;
  }
  FAIL("missing check " << name);
  throw std::logic_error("unreachable");
}

}  // namespace

TEST_CASE("report contains exactly the registry, in order") {
  const auto rep = qed::run_verification(fig(2), {});
  const auto& reg = qed::check_registry();
  REQUIRE(rep.checks.size() == reg.size());
  std::set<std::string> unique(reg.begin(), reg.end());
  CHECK(unique.size() == reg.size());
  for (std::size_t i = 0; i < reg.size(); ++i) CHECK(rep.checks[i].name == reg[i]);
  for (const char* required :
       {"null_quadrature_g0", "pole_zero_count", "neumann_boundary", "gradient_bound",
        "zero_period", "claim_1", "claim_6", "b_factor_antiperiod", "elliptic_legendre"}) {
    CHECK(unique.count(required) == 1);
  }
  CHECK(rep.all_pass);
  for (const auto& c : rep.checks) {
    CAPTURE(c.name);
    CHECK(c.pass);
    CHECK_FALSE(c.anchor.empty());
  }
}

TEST_CASE("Type I runs the claims and skips the flow checks") {
  const auto rep = qed::run_verification(fig(1), {});
  CHECK(rep.all_pass);
  for (int k = 1; k <= 6; ++k) CHECK_FALSE(find(rep, "claim_" + std::to_string(k)).skipped);
  CHECK(find(rep, "flow_circulation_sign").skipped);
  CHECK(find(rep, "roof_log_pole_growth").skipped);
  CHECK_FALSE(find(rep, "null_quadrature_g3").skipped);
}

TEST_CASE("identical spec and seed give identical JSON") {
  qed::VerifyOptions opt;
  opt.seed = 77;
  const std::string a = qed::report_to_json(qed::run_verification(fig(2), opt));
  const std::string b = qed::report_to_json(qed::run_verification(fig(2), opt));
  CHECK(a == b);
  const auto j = nlohmann::json::parse(a);
  CHECK(j["schema"] == 1);
  CHECK(j["seed"] == 77);
  CHECK(j["spec"]["type"] == "ii");
  CHECK(j["summary"]["failed"] == 0);
  CHECK(j["all_pass"] == true);
  CHECK(j["checks"].size() == qed::check_registry().size());
}

TEST_CASE("an injected asymmetry fails the zero-period check only") {
  qed::VerifyOptions opt;
  opt.inject_error = true;
  const auto rep = qed::run_verification(fig(2), opt);
  CHECK_FALSE(rep.all_pass);
  for (const auto& c : rep.checks) {
    CAPTURE(c.name);
    CHECK(c.pass == (c.name != "zero_period"));
  }
}

TEST_CASE("kernel self-test") {
  const auto checks = qed::kernel_selftest(5, 200);
  REQUIRE(checks.size() == 6);
  for (const auto& c : checks) {
    CAPTURE(c.name);
    CHECK(c.pass);
    CHECK(c.samples > 0);
  }
  const auto j = nlohmann::json::parse(qed::checks_to_json(checks, "kernel-selftest"));
  CHECK(j["all_pass"] == true);
  CHECK(j["report"] == "kernel-selftest");
}
