#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "core/errors.hpp"
#include "core/quadrature.hpp"
#include "doctest.h"

using qed::Complex;

namespace {
const Complex kI{0.0, 1.0};
constexpr double kPi = std::numbers::pi;
}  // namespace

TEST_CASE("polynomials and exponentials along segments") {
  const auto cube = [](Complex z) { return z * z * z; };
  const Complex a{0.3, -0.2}, b{1.7, 2.4};
  const Complex exact = (std::pow(b, 4) - std::pow(a, 4)) / 4.0;
  CHECK(std::abs(qed::integrate_segment(cube, a, b) - exact) < 1e-13 * std::abs(exact));

  const auto ex = [](Complex z) { return std::exp(z); };
  CHECK(std::abs(qed::integrate_segment(ex, a, b) - (std::exp(b) - std::exp(a))) < 1e-12);
  CHECK(qed::integrate_segment(ex, a, a) == Complex(0.0, 0.0));
}

TEST_CASE("closed polygon around a simple pole gives 2 pi i") {
  const Complex p{0.4, 0.1};
  const auto f = [&](Complex z) { return 1.0 / (z - p); };
  std::vector<Complex> loop;
  for (int k = 0; k <= 12; ++k) loop.push_back(p + 0.5 * std::polar(1.0, 2.0 * kPi * k / 12));
  const Complex total = qed::integrate_path(f, loop);
  CHECK(std::abs(total - 2.0 * kPi * kI) < 1e-12);
}

TEST_CASE("segments ending next to a pole still converge") {
  const Complex p{0.0, 0.5};
  const auto f = [&](Complex z) { return 1.0 / (z - p); };
  for (double d : {1e-3, 1e-5, 1e-7}) {
    CAPTURE(d);
    const Complex a{d, 0.625}, b{d, 0.5 + d};
    const Complex exact = std::log(b - p) - std::log(a - p);
    CHECK(std::abs(qed::integrate_segment(f, a, b) - exact) < 1e-9 * std::abs(exact));
  }
}

TEST_CASE("non-finite integrands are reported") {
  const auto bad = [](Complex) { return Complex(std::numeric_limits<double>::quiet_NaN(), 0.0); };
  CHECK_THROWS_AS(qed::integrate_segment(bad, 0.0, 1.0), qed::QuadratureError);
}

TEST_CASE("integrand exceptions propagate unchanged") {
  const auto thrower = [](Complex z) -> Complex {
    if (z.real() > 0.5) throw qed::PoleError("pole");
    return z;
  };
  CHECK_THROWS_AS(qed::integrate_segment(thrower, 0.0, 1.0), qed::PoleError);
}
