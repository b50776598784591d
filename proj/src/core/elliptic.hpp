#pragma once

#include <array>
#include <complex>

namespace qed {

using Complex = std::complex<double>;

// Which of the three rectangular lattices used by the construction is meant.
// All are built from the same pair (omega, Im omega'):
//   Roof  : generators (2*omega, 2*omega')   roof-function derivative v_z
//   BFactor, Sigma : generators (4*omega, 2*omega')   B factor and the
//   sigma-ratio form of F. They coincide as lattices; the tag only records
//   the caller's intent.
enum class LatticeKind { Roof, BFactor, Sigma, Custom };

// Immutable rectangular period lattice with precomputed invariants.
//
// Conventions (DLMF 23): omega1 is the real half-period and omega3 the
// imaginary one, so the generators are 2*omega1 and 2*omega3. The
// quasi-period constants are eta1 = zeta(omega1) and eta3 = zeta(omega3), and
// they satisfy Legendre's relation eta1*omega3 - eta3*omega1 = i*pi/2.
// sigma(z + 2*omega_k) = -exp(2*eta_k*(z + omega_k)) * sigma(z).
class Lattice {
 public:
  // Lattice with half-periods (a, i*b); a, b > 0.
  static Lattice from_half_periods(double a, double b,
                                   LatticeKind kind = LatticeKind::Custom);

  LatticeKind kind() const { return kind_; }
  Complex omega1() const { return {a_, 0.0}; }
  Complex omega3() const { return {0.0, b_}; }
  std::array<Complex, 2> generators() const {
    return {Complex(2.0 * a_, 0.0), Complex(0.0, 2.0 * b_)};
  }
  double g2() const { return g2_; }
  double g3() const { return g3_; }
  Complex eta1() const { return eta1_; }
  Complex eta3() const { return eta3_; }
  // Roots e1 = wp(omega1), e2 = wp(omega1 + omega3), e3 = wp(omega3).
  std::array<double, 3> roots() const { return {e1_, e2_, e3_}; }
  // exp(-pi * Im(omega3) / omega1), the nome of the native frame.
  double nome() const { return nome_; }

  Complex wp(Complex z) const;
  Complex wp_prime(Complex z) const;
  Complex zeta(Complex z) const;
  Complex sigma(Complex z) const;

  // Distance from z to the nearest lattice point.
  double distance_to_lattice(Complex z) const;
  // z - (nearest lattice point).
  Complex reduce(Complex z) const;

  // Pole guard used by wp, wp_prime and zeta.
  static constexpr double kPoleGuard = 1e-13;

 private:
  // Theta-series evaluation happens in a canonical frame with real half
  // period ca_ and imaginary half period i*cb_, cb_ >= ca_, reached from the
  // native frame by z -> rot_ * z with rot_ in {1, -i}.
  struct Thetas {
    Complex t1, t1p, t2, t3, t4;
  };
  struct Reduced {
    Complex z0;  // canonical coordinate reduced to the central cell
    long m, n;   // canonical lattice translation indices
  };
  Thetas thetas(Complex v) const;
  Reduced reduce_canonical(Complex zc) const;
  Complex wp_canonical(Complex zc) const;
  Complex wp_prime_canonical(Complex zc) const;
  Complex zeta_canonical(Complex zc) const;
  Complex sigma_canonical(Complex zc) const;
  void check_pole(Complex z, const char* fn) const;

  LatticeKind kind_ = LatticeKind::Custom;
  double a_ = 0, b_ = 0;
  bool rotated_ = false;
  double ca_ = 0, cb_ = 0, q_ = 0;
  int terms_ = 0;
  double th1p0_ = 0, th2_0 = 0, th3_0 = 0, th4_0 = 0;
  double ceta_a_ = 0;     // zeta(ca) in the canonical frame (real)
  Complex ceta_b_;        // zeta(i*cb) in the canonical frame (imaginary)
  double nome_ = 0;
  double e1_ = 0, e2_ = 0, e3_ = 0, g2_ = 0, g3_ = 0;
  Complex eta1_, eta3_;
};

// Build the lattice a construction asks for. half_period_real is the omega of
// the domain spec (omega_1 = 2*omega), half_period_imag is Im omega'.
Lattice lattice_build(double half_period_real, double half_period_imag,
                      LatticeKind kind);

}  // namespace qed
