#include <cmath>
#include <random>
#include <sstream>

#include "core/errors.hpp"
#include "core/io.hpp"
#include "doctest.h"

using qed::Complex;
using qed::LabeledCurve;

namespace {

const qed::ConstructedMap& fig2() {
  static const qed::ConstructedMap cm = qed::build_map(qed::DomainSpec{});
  return cm;
}

const qed::ConstructedMap& fig1() {
  static const qed::ConstructedMap cm = [] {
    qed::DomainSpec s;
    s.kind = qed::DomainKind::TypeI;
    s.epsilon.reset();
    return qed::build_map(s);
  }();
  return cm;
}

}  // namespace

TEST_CASE("shortest formatting round-trips doubles") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int k = 0; k < 1000; ++k) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    CHECK(std::stod(qed::format_double(v)) == v);
  }
  CHECK(qed::format_double(0.5) == "0.5");
  CHECK(qed::format_double(-2.0) == "-2");
}

TEST_CASE("CSV round trip of a boundary trace") {
  const auto trace = qed::trace_boundary(fig2());
  const auto curves = qed::trace_curves(trace);
  std::stringstream ss;
  qed::write_curves_csv(ss, curves);
  const std::string text = ss.str();
  CHECK(text.rfind("curve_id,x,y\n", 0) == 0);
  const auto back = qed::parse_curves_csv(ss);
  REQUIRE(back.size() == curves.size());
  for (std::size_t i = 0; i < curves.size(); ++i) {
    CHECK(back[i].id == curves[i].id);
    REQUIRE(back[i].points.size() == curves[i].points.size());
    double worst = 0.0;
    for (std::size_t k = 0; k < curves[i].points.size(); ++k) {
      worst = std::max(worst, std::abs(back[i].points[k] - curves[i].points[k]));
    }
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("malformed CSV is rejected") {
  std::istringstream empty("");
  CHECK_THROWS_AS(qed::parse_curves_csv(empty), qed::IoError);
  std::istringstream header("id,x,y\n");
  CHECK_THROWS_AS(qed::parse_curves_csv(header), qed::IoError);
  std::istringstream fields("curve_id,x,y\na,1\n");
  CHECK_THROWS_AS(qed::parse_curves_csv(fields), qed::IoError);
  std::istringstream number("curve_id,x,y\na,1,zz\n");
  CHECK_THROWS_AS(qed::parse_curves_csv(number), qed::IoError);
  std::istringstream crlf("curve_id,x,y\r\na,1,2\r\n");
  const auto ok = qed::parse_curves_csv(crlf);
  REQUIRE(ok.size() == 1);
  CHECK(ok[0].points[0] == Complex(1.0, 2.0));
}

TEST_CASE("SVG: viewBox with 5% margin, one stroke-only path per curve") {
  const std::vector<LabeledCurve> curves = {{"a", {{0, 0}, {10, 0}, {10, 20}}},
                                            {"b", {{2, 2}, {3, 3}}}};
  std::ostringstream os;
  qed::write_svg(os, {{curves, {}}});
  const std::string svg = os.str();
  CHECK(svg.find("viewBox=\"-0.5 -21 11 22\"") != std::string::npos);
  std::size_t paths = 0;
  for (std::size_t p = svg.find("<path"); p != std::string::npos; p = svg.find("<path", p + 1)) {
    ++paths;
  }
  CHECK(paths == 2);
  CHECK(svg.find("fill=\"none\"") != std::string::npos);
  // The y axis is flipped.
  CHECK(svg.find("L10,-20") != std::string::npos);
}

TEST_CASE("plot curves: two periods for Type II, clipped arcs for Type I") {
  const auto tr2 = qed::trace_boundary(fig2());
  const auto p2 = qed::plot_curves(tr2);
  REQUIRE(p2.size() == 4);
  CHECK(p2[0].id == "bubble_0_p0");
  CHECK(p2[2].id == "bubble_0_p1");
  CHECK(std::abs(p2[2].points[5] - p2[0].points[5] - tr2.period) < 1e-12);
  CHECK(tr2.period.real() > 0.0);

  const auto tr1 = qed::trace_boundary(fig1());
  const auto p1 = qed::plot_curves(tr1, 2, 3.0);
  qed::BBox box{};
  for (const auto& c : tr1.curves) {
    if (c.closed) box = qed::bounding_box(c.points);
  }
  const Complex centre{0.5 * (box.xmin + box.xmax), 0.5 * (box.ymin + box.ymax)};
  double reach = box.diagonal();
  for (const auto& c : tr1.curves) {
    if (c.closed) continue;
    double nearest = 1e300;
    for (Complex z : c.points) nearest = std::min(nearest, std::abs(z - centre));
    reach = std::max(reach, nearest);
  }
  int arcs = 0;
  for (const auto& c : p1) {
    if (c.id.rfind("top", 0) == 0) continue;
    ++arcs;
    CHECK(c.points.size() > 10);
    for (Complex z : c.points) CHECK(std::abs(z - centre) <= 3.0 * reach * (1 + 1e-12));
  }
  CHECK(arcs >= 2);
}

TEST_CASE("writing to an unwritable path raises IoError") {
  CHECK_THROWS_AS(qed::write_text_file("/nonexistent-dir/x.svg", "x"), qed::IoError);
}
