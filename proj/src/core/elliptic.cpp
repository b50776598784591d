#include "core/elliptic.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "core/errors.hpp"

namespace qed {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

long nearest_index(double x) { return static_cast<long>(std::floor(x + 0.5)); }

}  // namespace

Lattice Lattice::from_half_periods(double a, double b, LatticeKind kind) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    std::ostringstream os;
    os << "lattice half-periods must be positive and finite (got " << a << ", "
       << b << ")";
    throw InvalidArgument(os.str());
  }
  Lattice lat;
  lat.kind_ = kind;
  lat.a_ = a;
  lat.b_ = b;
  lat.nome_ = std::exp(-kPi * b / a);
  if (lat.nome_ >= 1.0 - 1e-6) {
    std::ostringstream os;
    os << "degenerate lattice aspect ratio: nome " << lat.nome_
       << " >= 1 - 1e-6";
    throw InvalidArgument(os.str());
  }

  // Pick the frame with the smaller nome; q <= exp(-pi) afterwards.
  lat.rotated_ = b < a;
  lat.ca_ = lat.rotated_ ? b : a;
  lat.cb_ = lat.rotated_ ? a : b;
  const double log_q = -kPi * lat.cb_ / lat.ca_;
  lat.q_ = std::exp(log_q);
  // Largest term of the n-th order is bounded by q^(n^2 - n) inside the cell.
  int n = 1;
  while (static_cast<double>(n * n - n) * (-log_q) < 45.0) ++n;
  lat.terms_ = n + 1;

  double t1p = 0, t1ppp = 0, t2 = 0, t3 = 1, t4 = 1;
  for (int k = 0; k < lat.terms_; ++k) {
    const double h = k + 0.5;
    const double qh = std::exp(log_q * h * h);
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    const double odd = 2.0 * k + 1.0;
    t1p += 2.0 * sign * odd * qh;
    t1ppp -= 2.0 * sign * odd * odd * odd * qh;
    t2 += 2.0 * qh;
    if (k >= 1) {
      const double qk = std::exp(log_q * k * k);
      t3 += 2.0 * qk;
      t4 += 2.0 * sign * qk;
    }
  }
  lat.th1p0_ = t1p;
  lat.th2_0 = t2;
  lat.th3_0 = t3;
  lat.th4_0 = t4;
  lat.ceta_a_ = -kPi * kPi * t1ppp / (12.0 * lat.ca_ * t1p);
  {
    // zeta(i*cb) straight from the theta quotient, no reduction involved, so
    // that Legendre's relation is a genuine check of the series.
    const double c = kPi / (2.0 * lat.ca_);
    const Complex zb{0.0, lat.cb_};
    const Thetas th = lat.thetas(c * zb);
    lat.ceta_b_ = lat.ceta_a_ * zb / lat.ca_ + c * th.t1p / th.t1;
  }

  if (lat.rotated_) {
    lat.eta1_ = kI * lat.ceta_b_;
    lat.eta3_ = -kI * lat.ceta_a_;
  } else {
    lat.eta1_ = lat.ceta_a_;
    lat.eta3_ = lat.ceta_b_;
  }

  lat.e1_ = lat.wp(lat.omega1()).real();
  lat.e2_ = lat.wp(lat.omega1() + lat.omega3()).real();
  lat.e3_ = lat.wp(lat.omega3()).real();
  lat.g2_ = 2.0 * (lat.e1_ * lat.e1_ + lat.e2_ * lat.e2_ + lat.e3_ * lat.e3_);
  lat.g3_ = 4.0 * lat.e1_ * lat.e2_ * lat.e3_;
  return lat;
}

Lattice::Thetas Lattice::thetas(Complex v) const {
  Thetas th{};
  const double log_q = -kPi * cb_ / ca_;
  Complex t1 = 0, t1p = 0, t2 = 0, t3 = 1.0, t4 = 1.0;
  for (int k = 0; k < terms_; ++k) {
    const double h = k + 0.5;
    const double qh = std::exp(log_q * h * h);
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    const double odd = 2.0 * k + 1.0;
    const Complex s = std::sin(odd * v);
    const Complex c = std::cos(odd * v);
    t1 += 2.0 * sign * qh * s;
    t1p += 2.0 * sign * odd * qh * c;
    t2 += 2.0 * qh * c;
    if (k >= 1) {
      const double qk = std::exp(log_q * k * k);
      const Complex c2 = std::cos(2.0 * k * v);
      t3 += 2.0 * qk * c2;
      t4 += 2.0 * sign * qk * c2;
    }
  }
  th.t1 = t1;
  th.t1p = t1p;
  th.t2 = t2;
  th.t3 = t3;
  th.t4 = t4;
  return th;
}

Lattice::Reduced Lattice::reduce_canonical(Complex zc) const {
  if (!(std::abs(zc) < 1e12)) {
    throw InvalidArgument("elliptic argument is not finite or too large");
  }
  Reduced r{};
  r.m = nearest_index(zc.real() / (2.0 * ca_));
  r.n = nearest_index(zc.imag() / (2.0 * cb_));
  r.z0 = zc - Complex(2.0 * r.m * ca_, 2.0 * r.n * cb_);
  return r;
}

Complex Lattice::reduce(Complex z) const {
  const long m = nearest_index(z.real() / (2.0 * a_));
  const long n = nearest_index(z.imag() / (2.0 * b_));
  return z - Complex(2.0 * m * a_, 2.0 * n * b_);
}

double Lattice::distance_to_lattice(Complex z) const {
  return std::abs(reduce(z));
}

void Lattice::check_pole(Complex z, const char* fn) const {
  const double d = distance_to_lattice(z);
  if (d < kPoleGuard) {
    std::ostringstream os;
    os << fn << ": argument (" << z.real() << ", " << z.imag()
       << ") is within " << d << " of a lattice pole";
    throw PoleError(os.str());
  }
}

Complex Lattice::wp_canonical(Complex zc) const {
  const Reduced r = reduce_canonical(zc);
  const double c = kPi / (2.0 * ca_);
  const Thetas th = thetas(c * r.z0);
  const double e1 = kPi * kPi / (12.0 * ca_ * ca_) *
                    (std::pow(th3_0, 4) + std::pow(th4_0, 4));
  const Complex root = c * th3_0 * th4_0 * th.t2 / th.t1;
  return e1 + root * root;
}

Complex Lattice::wp_prime_canonical(Complex zc) const {
  const Reduced r = reduce_canonical(zc);
  const double c = kPi / (2.0 * ca_);
  const Thetas th = thetas(c * r.z0);
  const double k = th2_0 * th3_0 * th4_0;
  return -2.0 * c * c * c * k * k * th.t2 * th.t3 * th.t4 /
         (th.t1 * th.t1 * th.t1);
}

Complex Lattice::zeta_canonical(Complex zc) const {
  const Reduced r = reduce_canonical(zc);
  const double c = kPi / (2.0 * ca_);
  const Thetas th = thetas(c * r.z0);
  return ceta_a_ * r.z0 / ca_ + c * th.t1p / th.t1 +
         2.0 * static_cast<double>(r.m) * ceta_a_ +
         2.0 * static_cast<double>(r.n) * ceta_b_;
}

Complex Lattice::sigma_canonical(Complex zc) const {
  const Reduced r = reduce_canonical(zc);
  const double c = kPi / (2.0 * ca_);
  const Thetas th = thetas(c * r.z0);
  Complex s = std::exp(ceta_a_ * r.z0 * r.z0 / (2.0 * ca_)) * th.t1 /
              (c * th1p0_);
  if (r.m != 0 || r.n != 0) {
    const double m = static_cast<double>(r.m);
    const double n = static_cast<double>(r.n);
    const Complex shift_eta = 2.0 * m * ceta_a_ + 2.0 * n * ceta_b_;
    const Complex half = r.z0 + Complex(m * ca_, n * cb_);
    const long parity = r.m + r.n + r.m * r.n;
    s *= std::exp(shift_eta * half);
    if (parity % 2 != 0) s = -s;
  }
  return s;
}

Complex Lattice::wp(Complex z) const {
  check_pole(z, "wp");
  return rotated_ ? -wp_canonical(-kI * z) : wp_canonical(z);
}

Complex Lattice::wp_prime(Complex z) const {
  check_pole(z, "wp_prime");
  return rotated_ ? kI * wp_prime_canonical(-kI * z) : wp_prime_canonical(z);
}

Complex Lattice::zeta(Complex z) const {
  check_pole(z, "zeta");
  return rotated_ ? -kI * zeta_canonical(-kI * z) : zeta_canonical(z);
}

Complex Lattice::sigma(Complex z) const {
  return rotated_ ? kI * sigma_canonical(-kI * z) : sigma_canonical(z);
}

Lattice lattice_build(double half_period_real, double half_period_imag,
                      LatticeKind kind) {
  if (!(half_period_real > 0.0) || !(half_period_imag > 0.0)) {
    std::ostringstream os;
    os << "lattice_build: omega and Im omega' must be positive (got "
       << half_period_real << ", " << half_period_imag << ")";
    throw InvalidArgument(os.str());
  }
  switch (kind) {
    case LatticeKind::Roof:
      return Lattice::from_half_periods(half_period_real, half_period_imag,
                                        kind);
    case LatticeKind::BFactor:
    case LatticeKind::Sigma:
      return Lattice::from_half_periods(2.0 * half_period_real,
                                        half_period_imag, kind);
    case LatticeKind::Custom:
      break;
  }
  return Lattice::from_half_periods(half_period_real, half_period_imag, kind);
}

}  // namespace qed
