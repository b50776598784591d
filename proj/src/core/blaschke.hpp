#pragma once

#include <array>

#include "core/elliptic.hpp"

namespace qed {

// Elliptic factor with periods (4*omega, 2*omega3), unimodular on the real
// axis and on the lines Im z = +-Im omega3:
//   B(z) = kappa * sigma(z - z1) sigma(z - z2) / (sigma(z - p1) sigma(z - p2))
// Poles p1 = omega + omega3/2, p2 = 3*omega + omega3/2. Zeros are their
// conjugates, the second one moved by 2*omega3 so that the zero sum equals
// the pole sum exactly.
//
// |kappa| makes |B(omega/2)| = 1. The phase of kappa is fixed so that
// B(omega + omega3/4) lies on the positive imaginary axis, which makes
// v_z * B real and positive on the vertical line through the first pole.
class BFactor {
 public:
  const Lattice& lattice() const { return lat_; }
  std::array<Complex, 2> poles() const { return poles_; }
  std::array<Complex, 2> zeros() const { return zeros_; }
  Complex kappa() const { return kappa_; }
  // sum(zeros) - sum(poles); zero by construction.
  Complex abel_defect() const { return zeros_[0] + zeros_[1] - poles_[0] - poles_[1]; }
  // Max of |B(conj z) conj B(z) - 1| over the build-time probe points.
  double symmetry_residual() const { return symmetry_residual_; }

  Complex eval(Complex z) const;
  // Distance from z to the nearest pole of B.
  double pole_distance(Complex z) const;

 private:
  friend BFactor build_b(const Lattice&);
  Complex ratio(Complex z) const;

  Lattice lat_;
  std::array<Complex, 2> poles_{};
  std::array<Complex, 2> zeros_{};
  Complex kappa_{1.0, 0.0};
  double symmetry_residual_ = 0.0;
};

// lat is the B lattice: half-periods 2*omega and Im omega3.
BFactor build_b(const Lattice& lat);

}  // namespace qed
