#include <cmath>
#include <numbers>

#include "core/errors.hpp"
#include "core/flow.hpp"
#include "core/geometry.hpp"
#include "doctest.h"

using qed::Complex;

namespace {

constexpr double kPi = std::numbers::pi;

const qed::ConstructedMap& fig2() {
  static const qed::ConstructedMap cm = qed::build_map(qed::DomainSpec{});
  return cm;
}

const qed::RoofGrid& fig2_grid() {
  static const qed::RoofGrid g = qed::sample_roof_grid(fig2(), 128, 65);
  return g;
}

qed::RoofGrid synthetic(int nx, int ny, double width, double height,
                        double (*fn)(double, double)) {
  qed::RoofGrid g;
  g.nx = nx;
  g.ny = ny;
  g.width = width;
  for (int i = 0; i < nx; ++i) g.xs.push_back((i + 0.5) * width / nx);
  for (int j = 0; j < ny; ++j) g.ys.push_back(j * height / (ny - 1));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) g.values.push_back(fn(g.xs[i], g.ys[j]));
  }
  return g;
}

}  // namespace

TEST_CASE("marching squares on analytic fields") {
  // A bump: the level set is a circle.
  const auto bump = synthetic(80, 81, 4.0, 2.0, [](double x, double y) {
    return std::exp(-((x - 2.0) * (x - 2.0) + (y - 1.0) * (y - 1.0)));
  });
  const double r = 0.5;
  const auto circles = qed::contour_level(bump, std::exp(-r * r));
  REQUIRE(circles.size() == 1);
  CHECK(circles[0].closed);
  for (Complex p : circles[0].points) CHECK(std::abs(std::abs(p - Complex(2.0, 1.0)) - r) < 5e-3);

  // A linear field: the level set wraps across the periodic seam.
  const auto ramp = synthetic(40, 21, 4.0, 2.0, [](double, double y) { return y; });
  const auto lines = qed::contour_level(ramp, 0.73);
  REQUIRE(lines.size() == 1);
  CHECK(lines[0].closed);
  for (Complex p : lines[0].points) CHECK(p.imag() == doctest::Approx(0.73));
  const auto& pts = lines[0].points;
  CHECK(std::abs(pts.back().real() - pts.front().real()) > 3.5);
}

TEST_CASE("roof grid matches direct evaluation") {
  const auto& g = fig2_grid();
  const auto bc = fig2().roof().boundary_constants();
  CHECK(g.at(5, 0) == bc[0]);
  CHECK(g.at(5, g.ny - 1) == bc[1]);
  for (int j : {7, 20, 40, 60}) {
    for (int i : {0, 31, 97}) {
      CHECK(std::abs(g.at(i, j) - fig2().roof().value(Complex(g.xs[i], g.ys[j]))) < 1e-9);
    }
  }
  // No row sits on the pole row.
  for (double y : g.ys) CHECK(std::abs(y - 0.5) > 1e-3);
}

TEST_CASE("ten streamline levels do not cross each other or the bubbles") {
  const qed::FlowField ff = qed::extract_streamlines(fig2(), fig2_grid(), 10);
  REQUIRE(ff.level_values.size() == 10);
  for (std::size_t k = 1; k < ff.level_values.size(); ++k) {
    CHECK(ff.level_values[k] > ff.level_values[k - 1]);
  }
  std::vector<qed::Polyline> lines;
  std::vector<bool> seen(10, false);
  for (const auto& s : ff.streamlines) {
    lines.push_back(s.image);
    seen[s.family] = true;
  }
  for (bool b : seen) CHECK(b);
  for (const auto& c : qed::trace_boundary(fig2()).curves) lines.push_back(c.points);
  CHECK_FALSE(qed::find_crossing(lines).has_value());
}

TEST_CASE("the boundary level is the bubble itself") {
  const auto bc = fig2().roof().boundary_constants();
  const auto lines = qed::streamlines_at(fig2(), fig2_grid(), bc[1]);
  REQUIRE(lines.size() == 1);
  CHECK(lines[0].boundary);
  const auto trace = qed::trace_boundary(fig2(), 4 * fig2_grid().nx);
  CHECK(lines[0].image == trace.curves[1].points);
}

TEST_CASE("a level through the saddle is split into separate branches") {
  qed::RoofGrid g = fig2_grid();
  const auto bc = fig2().roof().boundary_constants();
  const double cmin = std::min(bc[0], bc[1]);
  const double saddle = fig2().roof().value(fig2().cell().critical_points()[0]);
  // Clip the samples so that the single requested level is the saddle value;
  // contours below the clip are unaffected.
  const double top = cmin + 2.0 * (saddle - cmin);
  REQUIRE(g.max_value() > top);
  for (double& v : g.values) v = std::min(v, top);
  const qed::FlowField ff = qed::extract_streamlines(fig2(), g, 1);
  REQUIRE(ff.level_values.size() == 1);
  CHECK(ff.level_values[0] == doctest::Approx(saddle).epsilon(1e-12));
  CHECK(ff.streamlines.size() >= 2);
  std::vector<qed::Polyline> lines;
  for (const auto& s : ff.streamlines) {
    CHECK(s.saddle);
    lines.push_back(s.image);
  }
  CHECK_FALSE(qed::find_crossing(lines).has_value());
}

TEST_CASE("unit speed on both bubbles") {
  for (double y : {0.0, 2.0}) {
    for (int k = 0; k < 64; ++k) {
      const Complex z{4.0 * (k + 0.5) / 64.0, y};
      CHECK(std::abs(std::abs(qed::velocity(fig2(), z)) - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("circulations, pole flux and far field") {
  const auto c = qed::circulation_and_far_field(fig2());
  CHECK(c.gamma_bottom * c.gamma_top > 0.0);
  CHECK(std::abs(c.gamma_bottom + c.gamma_top - 2.0 * c.pole_flux) < 1e-8 * std::abs(c.pole_flux));
  // Pole flux against a trapezoid rule on a small circle around i*eps.
  const auto& roof = fig2().roof();
  const Complex p{0.0, 0.5};
  const int n = 256;
  Complex sum = 0.0;
  for (int k = 0; k < n; ++k) {
    const Complex e = std::polar(1.0, 2.0 * kPi * k / n);
    sum += 2.0 * roof.vz(p + 0.1 * e) * Complex(0.0, 2.0 * kPi / n) * 0.1 * e;
  }
  CHECK(sum.imag() == doctest::Approx(c.pole_flux).epsilon(1e-12));
  CHECK(c.far_above.real() * c.far_below.real() < 0.0);
  CHECK(std::abs(c.far_above.imag()) < 1e-9 * std::abs(c.far_above));
  CHECK(std::abs(c.far_below.imag()) < 1e-9 * std::abs(c.far_below));
  // Velocity near the pole approaches the far-field value.
  const Complex near = qed::velocity(fig2(), p + Complex(1e-4, 1e-4));
  CHECK(std::abs(near - c.far_above) < 1e-3 * std::abs(c.far_above));
}

TEST_CASE("Type I has no flow interpretation") {
  qed::DomainSpec s;
  s.kind = qed::DomainKind::TypeI;
  s.epsilon.reset();
  const auto cm = qed::build_map(s);
  CHECK_THROWS_AS(qed::circulation_and_far_field(cm), qed::InvalidArgument);
}
