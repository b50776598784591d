#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "core/elliptic.hpp"
#include "core/quadrature.hpp"

namespace qed {

enum class DomainKind { TypeI, TypeII };

// The period rectangle G = [0, 4*omega] x [0, Im omega3] in the pullback
// plane, omega_1 = 2*omega. Type II carries the logarithmic pole offset.
struct PeriodCell {
  DomainKind kind = DomainKind::TypeII;
  double omega = 1.0;
  double height = 2.0;  // Im omega_3
  double epsilon = 0.0;

  double width() const { return 4.0 * omega; }
  Complex omega1() const { return {2.0 * omega, 0.0}; }
  Complex omega3() const { return {0.0, height}; }
  // Critical points of v (zeros of v_z) inside G.
  std::array<Complex, 2> critical_points() const {
    return {Complex(omega, 0.5 * height), Complex(3.0 * omega, 0.5 * height)};
  }
  // Singular points of v_z on the closed rectangle: the double poles
  // 0, 2w, 4w on the bottom side (Type I) or the simple poles i*eps,
  // 2w + i*eps, 4w + i*eps (Type II).
  std::vector<Complex> singularities() const;
};

// Path policy shared by v and f. Every path starts on the vertical line
// Re z = omega at one of a fixed set of anchor heights, whose integrals are
// tabulated once.
//
// Type I: legs run along the mid-height line, which avoids the boundary poles.
// Type II: legs run horizontally at the height of the target, so that f is
// single valued on G cut along [2w + i*eps, 4w + i*eps]; targets within
// `dodge` of the pole height are approached from their own side.
class Router {
 public:
  static constexpr int kAnchorIntervals = 16;

  Router() = default;
  explicit Router(const PeriodCell& cell);

  Complex base_point() const { return {cell_.omega, 0.0}; }
  double anchor_height(int k) const {
    return cell_.height * k / kAnchorIntervals;
  }
  Complex anchor(int k) const { return {cell_.omega, anchor_height(k)}; }

  struct Route {
    int anchor = 0;
    std::vector<Complex> path;  // starts at anchor(anchor), ends at target
  };
  Route route(Complex z) const;
  double dodge() const { return dodge_; }

 private:
  PeriodCell cell_;
  double dodge_ = 0.0;
};

// Tabulated integrals of a holomorphic integrand from the base point up the
// anchor line, plus the path rule above. Immutable after build().
class AnchoredIntegral {
 public:
  AnchoredIntegral() = default;
  AnchoredIntegral(const Router& router, const ComplexFn& fn);

  // Integral from the base point to z along the routed path.
  Complex to(const ComplexFn& fn, Complex z) const;
  // Integral from the base point along an explicit path that starts there.
  static Complex along(const ComplexFn& fn, std::span<const Complex> path);
  const Router& router() const { return router_; }
  Complex anchor_value(int k) const { return anchors_.at(k); }

 private:
  Router router_;
  std::vector<Complex> anchors_;
};

// Pullback roof function v and its closed-form derivative
//   Type I : v_z = -i*wp + i*c0
//   Type II: v_z = -i*wp / (1 + c*wp) + i*c0,   c = -1/wp(i*eps)
// with wp on the (omega_1, 2*omega_3) lattice.
class RoofField {
 public:
  DomainKind kind() const { return cell_.kind; }
  const PeriodCell& cell() const { return cell_; }
  const Lattice& lattice() const { return lat_; }
  double c0() const { return c0_; }
  double c_pole() const { return c_pole_; }
  double epsilon() const { return cell_.epsilon; }
  // {bottom side, top side}; the smaller one is 0.
  std::array<double, 2> boundary_constants() const { return boundary_; }
  Complex base_point() const { return integral_.router().base_point(); }
  double base_value() const { return base_value_; }

  Complex vz(Complex z) const;
  Complex vz_prime(Complex z) const;
  // v(z) = base_value + 2 Re int_base^z v_z dz.
  double value(Complex z) const;
  // Same, along a caller-supplied path that starts at base_point().
  double value_along(std::span<const Complex> path) const;
  // Residue of v_z at i*eps (Type II); real.
  double pole_residue() const;
  // Residuals of the construction constants (critical points, pole placement).
  std::array<double, 3> construction_residuals() const { return residuals_; }
  const AnchoredIntegral& anchored() const { return integral_; }
  ComplexFn vz_fn() const {
    return [this](Complex z) { return vz(z); };
  }

 private:
  friend RoofField build_roof(DomainKind, const Lattice&, std::optional<double>);
  void check_pole(Complex z) const;

  PeriodCell cell_;
  Lattice lat_;
  double c0_ = 0.0;
  double c_pole_ = 0.0;
  double base_value_ = 0.0;
  std::array<double, 2> boundary_{0.0, 0.0};
  std::array<double, 3> residuals_{0.0, 0.0, 0.0};
  AnchoredIntegral integral_;
};

// lat must be the roof lattice (half-periods omega and Im omega_3).
RoofField build_roof(DomainKind kind, const Lattice& lat,
                     std::optional<double> epsilon = std::nullopt);

}  // namespace qed
