#include <cmath>
#include <numbers>

#include "core/geometry.hpp"
#include "doctest.h"

using qed::Complex;
using qed::Polyline;

namespace {

Polyline circle(Complex c, double r, int n) {
  Polyline p;
  for (int k = 0; k <= n; ++k) {
    p.push_back(c + r * std::polar(1.0, 2.0 * std::numbers::pi * (k % n) / n));
  }
  return p;
}

}  // namespace

TEST_CASE("segment intersection predicate") {
  CHECK(qed::segments_intersect({0, 0}, {1, 1}, {0, 1}, {1, 0}));
  CHECK_FALSE(qed::segments_intersect({0, 0}, {1, 0}, {0, 1}, {1, 1}));
  // Touching at an endpoint counts.
  CHECK(qed::segments_intersect({0, 0}, {1, 0}, {1, 0}, {2, 3}));
  // Collinear overlap and collinear disjoint.
  CHECK(qed::segments_intersect({0, 0}, {2, 0}, {1, 0}, {3, 0}));
  CHECK_FALSE(qed::segments_intersect({0, 0}, {1, 0}, {2, 0}, {3, 0}));
}

TEST_CASE("crossing sweep") {
  const Polyline a = circle({0, 0}, 1.0, 200);
  const Polyline b = circle({3, 0}, 1.0, 200);
  CHECK_FALSE(qed::find_crossing({a, b}).has_value());
  CHECK_FALSE(qed::find_crossing({a}).has_value());
  const Polyline c = circle({1.5, 0}, 1.0, 200);
  const auto x = qed::find_crossing({a, c});
  REQUIRE(x.has_value());
  CHECK(x->curve_a != x->curve_b);
  // A figure eight crosses itself.
  Polyline eight;
  for (int k = 0; k <= 400; ++k) {
    const double t = 2.0 * std::numbers::pi * ((k % 400) + 0.3) / 400;
    eight.emplace_back(std::sin(t), std::sin(t) * std::cos(t));
  }
  const auto s = qed::find_crossing({eight});
  REQUIRE(s.has_value());
  CHECK(s->curve_a == 0);
  CHECK(s->curve_b == 0);
  // Nested circles do not cross.
  CHECK_FALSE(qed::find_crossing({a, circle({0.1, 0}, 0.5, 100)}).has_value());
}

TEST_CASE("winding numbers, bounding boxes, diameters") {
  const Polyline a = circle({0, 0}, 1.0, 64);
  CHECK(qed::winding_number(a, {0.2, 0.1}) == 1);
  CHECK(qed::winding_number(a, {1.5, 0.0}) == 0);
  Polyline rev(a.rbegin(), a.rend());
  CHECK(qed::winding_number(rev, {0.0, 0.0}) == -1);
  const qed::BBox box = qed::bounding_box(Polyline{{0, 0}, {3, 4}, {1, -1}});
  CHECK(box.xmin == 0.0);
  CHECK(box.xmax == 3.0);
  CHECK(box.ymin == -1.0);
  CHECK(box.ymax == 4.0);
  CHECK(qed::diameter(Polyline{{0, 0}, {3, 4}}) == doctest::Approx(5.0));
}
