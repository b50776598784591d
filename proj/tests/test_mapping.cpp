#include <cmath>

#include "core/errors.hpp"
#include "core/mapping.hpp"
#include "doctest.h"

using qed::Complex;
using qed::ConstructedMap;
using qed::DomainKind;
using qed::DomainSpec;

namespace {

DomainSpec fig1() {
  DomainSpec s;
  s.kind = DomainKind::TypeI;
  s.omega = 1.0;
  s.omega_prime_imag = 2.0;
  s.epsilon.reset();
  return s;
}
DomainSpec fig2() { return DomainSpec{}; }
DomainSpec fig3() {
  DomainSpec s;
  s.omega_prime_imag = 1.5;
  s.epsilon = 0.4;
  return s;
}

const ConstructedMap& cached(int which) {
  static const ConstructedMap m1 = qed::build_map(fig1());
  static const ConstructedMap m2 = qed::build_map(fig2());
  static const ConstructedMap m3 = qed::build_map(fig3());
  return which == 1 ? m1 : which == 2 ? m2 : m3;
}

// Composite Simpson along a straight segment.
Complex simpson(const ConstructedMap& cm, Complex a, Complex b, int n) {
  const Complex h = (b - a) / static_cast<double>(n);
  Complex s = cm.F(a) + cm.F(b);
  for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * cm.F(a + static_cast<double>(k) * h);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("f differences agree with a fine Simpson rule") {
  const std::pair<Complex, Complex> segs[] = {
      {Complex(0.5, 1.2), Complex(3.5, 1.4)},
      {Complex(1.0, 0.2), Complex(1.3, 1.9)},
      {Complex(2.6, 0.05), Complex(3.9, 0.3)},
  };
  for (int which : {1, 2, 3}) {
    const ConstructedMap& cm = cached(which);
    for (auto [a, b] : segs) {
      if (b.imag() > cm.cell().height) continue;
      CAPTURE(which);
      CAPTURE(a);
      const Complex oracle = simpson(cm, a, b, 20000);
      CHECK(std::abs(cm.f(b) - cm.f(a) - oracle) < 1e-9 * (1.0 + std::abs(oracle)));
    }
  }
}

TEST_CASE("f vanishes at the base point and F is its derivative") {
  for (int which : {1, 2, 3}) {
    const ConstructedMap& cm = cached(which);
    CHECK(std::abs(cm.f(cm.base_point())) < 1e-12);
    const Complex z{2.7, 0.3 * cm.cell().height};
    const double h = 1e-5;
    const Complex fd = (cm.f(z + h) - cm.f(z - h)) / (2.0 * h);
    CHECK(std::abs(fd - cm.F(z)) < 1e-6 * std::abs(cm.F(z)));
  }
}

TEST_CASE("sigma quotient and product form are proportional") {
  for (int which : {1, 2, 3}) {
    const ConstructedMap& cm = cached(which);
    CHECK(cm.cross_form_spread() < 1e-10);
    CHECK(cm.cross_form_samples() == 100);
    for (Complex z : {Complex(0.4, 0.7), Complex(2.2, 1.1), Complex(3.3, 0.2)}) {
      if (z.imag() >= cm.cell().height) continue;
      CHECK(std::abs(cm.F(z) - cm.F_product(z)) < 1e-10 * std::abs(cm.F(z)));
    }
  }
}

TEST_CASE("normalizations: unit Neumann data and the raw sigma quotient") {
  for (int which : {1, 2, 3}) {
    const ConstructedMap& cm = cached(which);
    CHECK(cm.scale() == Complex(2.0, 0.0));
    for (double x : {0.3, 1.7, 3.1}) {
      CHECK(std::abs(cm.gradient_modulus(Complex(x, cm.cell().height)) - 1.0) < 1e-12);
    }
  }
  DomainSpec raw = fig3();
  raw.normalization = qed::Normalization::RawSigmaRatio;
  const ConstructedMap cm = qed::build_map(raw);
  const Complex z{1.3, 0.9};
  CHECK(std::abs(cm.F(z) - cm.F_sigma_raw(z)) < 1e-14 * std::abs(cm.F(z)));
  CHECK(std::abs(cm.gradient_modulus(Complex(0.7, 0.0)) - 1.0) < 1e-12);
}

TEST_CASE("zero period at several heights and the perturbed control") {
  for (int which : {1, 2, 3}) {
    const ConstructedMap& cm = cached(which);
    for (double t : {0.15, 0.45, 0.8}) {
      const double y = t * cm.cell().height;
      const auto r = qed::zero_period_check(cm, y);
      CHECK(r.pass);
      CHECK(r.residual < r.tolerance);
      const auto bad = qed::zero_period_check(cm, y, true);
      CHECK_FALSE(bad.pass);
      CHECK(bad.residual > 1e3 * bad.tolerance);
    }
  }
}

TEST_CASE("Type II period: translation by 2 pi i times the residue of F") {
  const ConstructedMap& cm = cached(2);
  // The jump of f across the cut equals the period; measure it directly.
  const double d = 1e-3;
  const Complex above = cm.f(Complex(3.0, 0.5 + d));
  const Complex below = cm.f(Complex(3.0, 0.5 - d));
  CHECK(std::abs(std::abs(above - below) - std::abs(cm.period())) < 0.05 * std::abs(cm.period()));
  CHECK(std::abs(cm.alignment()) == doctest::Approx(1.0));
  const Complex aligned = cm.alignment() * cm.period();
  CHECK(aligned.real() > 0.0);
  CHECK(std::abs(aligned.imag()) < 1e-12 * aligned.real());
}

TEST_CASE("trace topology, closure and mirror symmetry") {
  for (int which : {1, 2, 3}) {
    const ConstructedMap& cm = cached(which);
    for (int n : {256, 1024}) {
      const qed::BoundaryTrace tr = qed::trace_boundary(cm, n);
      const qed::TopologyResult topo = qed::classify_topology(tr);
      CHECK(topo.expected);
      if (cm.cell().kind == DomainKind::TypeII) {
        CHECK(topo.closed_curves == 2);
        CHECK(topo.open_arcs == 0);
      } else {
        CHECK(topo.closed_curves == 1);
        CHECK(topo.open_arcs == 2);
      }
      for (const auto& c : tr.curves) {
        if (!c.closed) continue;
        CHECK(c.closure_gap < 1e-9);
        CHECK(c.points.front() == c.points.back());
        CHECK(qed::mirror_residual(c.points, cm.cell().kind == DomainKind::TypeII).residual <
              1e-9);
      }
      CHECK_FALSE(qed::trace_crossing(tr).has_value());
    }
  }
}

TEST_CASE("Type I univalence claims hold with positive margins") {
  const auto claims = qed::check_claims(cached(1));
  REQUIRE(claims.size() == 6);
  for (const auto& c : claims) {
    CAPTURE(c.claim);
    CHECK(c.pass);
    CHECK(c.margin > 0.0);
  }
}

TEST_CASE("spec validation") {
  DomainSpec s = fig2();
  s.epsilon = 1.0;
  CHECK_THROWS_AS(qed::build_map(s), qed::InvalidArgument);
  s.epsilon.reset();
  CHECK_THROWS_AS(qed::build_map(s), qed::InvalidArgument);
  s = fig2();
  s.omega = 0.0;
  CHECK_THROWS_AS(qed::build_map(s), qed::InvalidArgument);
  s = fig2();
  s.samples_per_side = 10;
  CHECK_THROWS_AS(qed::build_map(s), qed::InvalidArgument);
  // Aspect condition: warning under unit normalization, error for raw.
  s = fig2();
  s.omega_prime_imag = 0.9;
  s.epsilon = 0.3;
  CHECK_FALSE(qed::validate_spec(s).empty());
  s.normalization = qed::Normalization::RawSigmaRatio;
  CHECK_THROWS_AS(qed::validate_spec(s), qed::InvalidArgument);
  CHECK(qed::validate_spec(fig2()).empty());
  CHECK(std::string(qed::kind_name(DomainKind::TypeI)) == "i");
}

TEST_CASE("clustered samples are symmetric and include both ends") {
  const auto xs = qed::clustered_samples(0.0, 2.0, 65);
  REQUIRE(xs.size() == 65);
  CHECK(xs.front() == 0.0);
  CHECK(xs.back() == 2.0);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    CHECK(xs[i] + xs[xs.size() - 1 - i] == doctest::Approx(2.0).epsilon(1e-14));
  }
  CHECK(xs[1] - xs[0] < xs[33] - xs[32]);
}
