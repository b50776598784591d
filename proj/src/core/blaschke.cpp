#include "core/blaschke.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "core/errors.hpp"

namespace qed {

Complex BFactor::ratio(Complex z) const {
  return lat_.sigma(z - zeros_[0]) * lat_.sigma(z - zeros_[1]) /
         (lat_.sigma(z - poles_[0]) * lat_.sigma(z - poles_[1]));
}

double BFactor::pole_distance(Complex z) const {
  return std::min(lat_.distance_to_lattice(z - poles_[0]),
                  lat_.distance_to_lattice(z - poles_[1]));
}

Complex BFactor::eval(Complex z) const {
  const double d = pole_distance(z);
  if (d < Lattice::kPoleGuard) {
    std::ostringstream os;
    os << "B: argument (" << z.real() << ", " << z.imag() << ") is within "
       << d << " of a pole";
    throw PoleError(os.str());
  }
  return kappa_ * ratio(z);
}

BFactor build_b(const Lattice& lat) {
  BFactor bf;
  bf.lat_ = lat;
  const double omega = 0.5 * lat.omega1().real();
  const Complex w3 = lat.omega3();
  bf.poles_ = {omega + 0.5 * w3, 3.0 * omega + 0.5 * w3};
  bf.zeros_ = {std::conj(bf.poles_[0]), std::conj(bf.poles_[1]) + 2.0 * w3};

  const Complex at_real = bf.ratio(Complex(0.5 * omega, 0.0));
  const Complex at_ref = bf.ratio(Complex(omega, 0.25 * w3.imag()));
  if (!(std::abs(at_real) > 0.0) || !(std::abs(at_ref) > 0.0) ||
      !std::isfinite(std::abs(at_real)) || !std::isfinite(std::abs(at_ref))) {
    throw ConstructionError("B normalization points are degenerate");
  }
  const Complex phase = Complex(0.0, 1.0) * std::conj(at_ref) / std::abs(at_ref);
  bf.kappa_ = phase / std::abs(at_real);

  const Complex probes[] = {{0.3, 0.7}, {1.7 * omega, 0.2 * w3.imag()},
                            {3.1 * omega, 0.55 * w3.imag()},
                            {0.45 * omega, 0.9 * w3.imag()}};
  double worst = 0.0;
  for (Complex z : probes) {
    const Complex r = bf.eval(std::conj(z)) * std::conj(bf.eval(z)) - 1.0;
    worst = std::max(worst, std::abs(r));
  }
  bf.symmetry_residual_ = worst;
  if (!(worst < 1e-8)) {
    std::ostringstream os;
    os << "B conjugation symmetry residual " << worst << " exceeds 1e-8";
    throw ConstructionError(os.str());
  }
  return bf;
}

}  // namespace qed
