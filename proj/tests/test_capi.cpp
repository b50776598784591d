#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "qed/qed.h"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct Map {
  qed_map* m = nullptr;
  explicit Map(const qed_spec& s) { REQUIRE(qed_map_create(&s, &m) == QED_OK); }
  ~Map() { qed_map_destroy(m); }
};

std::string tmp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("default spec and evaluation") {
  qed_spec s;
  qed_spec_default(&s);
  CHECK(s.kind == QED_TYPE_II);
  CHECK(s.omega == 1.0);
  CHECK(s.omega_prime_imag == 2.0);
  CHECK(s.epsilon == 0.5);
  CHECK(s.samples_per_side == 1024);
  Map map(s);
  qed_complex out{};
  CHECK(qed_map_eval(map.m, QED_EVAL_MAP, {1.0, 0.0}, &out) == QED_OK);
  CHECK(std::hypot(out.re, out.im) < 1e-15);
  CHECK(qed_map_eval(map.m, QED_EVAL_B, {0.3, 0.0}, &out) == QED_OK);
  CHECK(std::hypot(out.re, out.im) == doctest::Approx(1.0));
  CHECK(qed_map_eval(map.m, QED_EVAL_V, {1.0, 2.0}, &out) == QED_OK);
  CHECK(out.re > 0.0);
  CHECK(qed_map_eval(map.m, QED_EVAL_VZ, {1.0, 1.0}, &out) == QED_OK);
  CHECK(std::hypot(out.re, out.im) < 1e-12);
  CHECK(qed_map_eval(map.m, QED_EVAL_VZ, {2.0, 0.5}, &out) == QED_POLE);
  CHECK(std::string(qed_last_error()).find("pole") != std::string::npos);
  CHECK(qed_map_warning_count(map.m) == 0);
  CHECK(qed_map_warning(map.m, 0) == nullptr);
}

TEST_CASE("invalid input is reported with a status and message") {
  qed_spec s;
  qed_spec_default(&s);
  s.epsilon = 1.5;
  qed_map* m = reinterpret_cast<qed_map*>(0x1);
  CHECK(qed_map_create(&s, &m) == QED_INVALID_ARGUMENT);
  CHECK(m == nullptr);
  CHECK(std::string(qed_last_error()).find("epsilon") != std::string::npos);
  CHECK(qed_map_create(nullptr, &m) == QED_INVALID_ARGUMENT);
  s.epsilon = NAN;
  CHECK(qed_map_create(&s, &m) == QED_INVALID_ARGUMENT);
  qed_spec_default(&s);
  s.kind = static_cast<qed_domain_kind>(7);
  CHECK(qed_map_create(&s, &m) == QED_INVALID_ARGUMENT);
  // Aspect violation: warning only.
  qed_spec_default(&s);
  s.omega_prime_imag = 0.9;
  s.epsilon = 0.3;
  s.samples_per_side = 256;
  Map warned(s);
  CHECK(qed_map_warning_count(warned.m) == 1);
}

TEST_CASE("trace handles expose the boundary curves") {
  qed_spec s;
  qed_spec_default(&s);
  Map map(s);
  qed_trace* t = nullptr;
  REQUIRE(qed_trace_create(map.m, 256, &t) == QED_OK);
  REQUIRE(qed_trace_curve_count(t) == 2);
  for (size_t i = 0; i < 2; ++i) {
    const char* label = nullptr;
    const qed_complex* pts = nullptr;
    size_t n = 0;
    int closed = 0;
    REQUIRE(qed_trace_curve(t, i, &label, &pts, &n, &closed) == QED_OK);
    CHECK(n == 257);
    CHECK(closed == 1);
    CHECK(pts[0].re == pts[n - 1].re);
    CHECK(std::string(label).rfind("bubble_", 0) == 0);
  }
  CHECK(qed_trace_curve(t, 2, nullptr, nullptr, nullptr, nullptr) == QED_INVALID_ARGUMENT);
  qed_trace_destroy(t);
}

TEST_CASE("summary, verification and self-test JSON") {
  qed_spec s;
  qed_spec_default(&s);
  s.kind = QED_TYPE_I;
  Map map(s);
  char* text = nullptr;
  REQUIRE(qed_map_summary_json(map.m, &text) == QED_OK);
  const auto summary = nlohmann::json::parse(text);
  qed_string_free(text);
  CHECK(summary["spec"]["type"] == "i");
  CHECK(summary["spec"]["epsilon"].is_null());
  CHECK(summary["trace"]["curves"].size() == 3);

  int ok = 0;
  REQUIRE(qed_verify_json(map.m, 3, 0, &text, &ok) == QED_OK);
  CHECK(ok == 1);
  CHECK(nlohmann::json::parse(text)["all_pass"] == true);
  qed_string_free(text);
  CHECK(qed_verify_json(map.m, 3, 1, &text, &ok) == QED_CHECK_FAILED);
  CHECK(ok == 0);
  REQUIRE(text != nullptr);
  qed_string_free(text);

  REQUIRE(qed_kernel_selftest_json(1, &text, &ok) == QED_OK);
  CHECK(ok == 1);
  qed_string_free(text);
}

TEST_CASE("plot and flow files") {
  qed_spec s;
  qed_spec_default(&s);
  s.samples_per_side = 256;
  Map map(s);
  const std::string svg = tmp_path("qed_capi_plot.svg");
  REQUIRE(qed_plot_write(map.m, QED_FORMAT_SVG, svg.c_str()) == QED_OK);
  const std::string body = slurp(svg);
  CHECK(body.rfind("<svg", 0) == 0);
  const std::string csv = tmp_path("qed_capi_flow.csv");
  REQUIRE(qed_flow_write(map.m, 4, QED_FORMAT_CSV, csv.c_str()) == QED_OK);
  CHECK(slurp(csv).rfind("curve_id,x,y\n", 0) == 0);
  const std::string js = tmp_path("qed_capi_flow.json");
  REQUIRE(qed_flow_write(map.m, 4, QED_FORMAT_JSON, js.c_str()) == QED_OK);
  const auto j = nlohmann::json::parse(slurp(js));
  CHECK(j["levels"].size() == 4);
  CHECK(j["circulation"]["bottom_bubble"].get<double>() * j["circulation"]["top_bubble"].get<double>() > 0.0);
  CHECK(qed_plot_write(map.m, QED_FORMAT_SVG, "/nonexistent-dir/p.svg") == QED_IO);
  CHECK(qed_flow_write(map.m, 0, QED_FORMAT_SVG, svg.c_str()) == QED_INVALID_ARGUMENT);
  std::remove(svg.c_str());
  std::remove(csv.c_str());
  std::remove(js.c_str());
}

TEST_CASE("version") { CHECK(std::string(qed_version()) == "1.0.0"); }
