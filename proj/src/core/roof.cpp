#include "core/roof.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "core/errors.hpp"

namespace qed {

namespace {

const Complex kI{0.0, 1.0};

void push_distinct(std::vector<Complex>& path, Complex p) {
  if (path.empty() || std::abs(path.back() - p) > 1e-15 * (1.0 + std::abs(p))) {
    path.push_back(p);
  }
}

}  // namespace

std::vector<Complex> PeriodCell::singularities() const {
  const double y = kind == DomainKind::TypeI ? 0.0 : epsilon;
  return {Complex(0.0, y), Complex(2.0 * omega, y), Complex(4.0 * omega, y)};
}

Router::Router(const PeriodCell& cell) : cell_(cell) {
  if (cell.kind == DomainKind::TypeII) {
    dodge_ = 0.25 * std::min(cell.epsilon, cell.height - cell.epsilon);
  }
}

Router::Route Router::route(Complex z) const {
  Route r;
  const double x = z.real();
  double y = z.imag();
  if (!std::isfinite(x) || !std::isfinite(y)) {
    throw InvalidArgument("route target is not finite");
  }
  if (cell_.kind == DomainKind::TypeI) {
    r.anchor = kAnchorIntervals / 2;
    const double ym = anchor_height(r.anchor);
    push_distinct(r.path, anchor(r.anchor));
    push_distinct(r.path, Complex(x, ym));
    push_distinct(r.path, z);
    return r;
  }
  // Type II: travel at the target height unless it hugs the pole row.
  double yr = y;
  if (std::abs(y - cell_.epsilon) < dodge_) {
    yr = y >= cell_.epsilon ? cell_.epsilon + dodge_ : cell_.epsilon - dodge_;
  }
  const double t = std::clamp(yr / cell_.height, 0.0, 1.0);
  r.anchor = static_cast<int>(std::lround(t * kAnchorIntervals));
  push_distinct(r.path, anchor(r.anchor));
  push_distinct(r.path, Complex(cell_.omega, yr));
  push_distinct(r.path, Complex(x, yr));
  push_distinct(r.path, z);
  return r;
}

AnchoredIntegral::AnchoredIntegral(const Router& router, const ComplexFn& fn)
    : router_(router) {
  anchors_.resize(Router::kAnchorIntervals + 1);
  anchors_[0] = 0.0;
  for (int k = 1; k <= Router::kAnchorIntervals; ++k) {
    anchors_[k] = anchors_[k - 1] +
                  integrate_segment(fn, router_.anchor(k - 1), router_.anchor(k));
  }
}

Complex AnchoredIntegral::to(const ComplexFn& fn, Complex z) const {
  const Router::Route r = router_.route(z);
  return anchors_.at(r.anchor) + integrate_path(fn, r.path);
}

Complex AnchoredIntegral::along(const ComplexFn& fn,
                                std::span<const Complex> path) {
  return integrate_path(fn, path);
}

void RoofField::check_pole(Complex z) const {
  if (cell_.kind != DomainKind::TypeII) return;
  const Complex p{0.0, cell_.epsilon};
  const double d = std::min(lat_.distance_to_lattice(z - p),
                            lat_.distance_to_lattice(z + p));
  if (d < Lattice::kPoleGuard) {
    std::ostringstream os;
    os << "v_z: argument (" << z.real() << ", " << z.imag()
       << ") is within " << d << " of a logarithmic pole";
    throw PoleError(os.str());
  }
}

Complex RoofField::vz(Complex z) const {
  if (cell_.kind == DomainKind::TypeI) {
    return -kI * lat_.wp(z) + kI * c0_;
  }
  check_pole(z);
  // wp / (1 + c wp) = 1 / (c + 1/wp), which stays finite at lattice points.
  const Complex u = lat_.reduce(z);
  const Complex inv = std::abs(u) < 1e-6 ? u * u : 1.0 / lat_.wp(z);
  return -kI / (c_pole_ + inv) + kI * c0_;
}

Complex RoofField::vz_prime(Complex z) const {
  if (cell_.kind == DomainKind::TypeI) {
    return -kI * lat_.wp_prime(z);
  }
  check_pole(z);
  const Complex u = lat_.reduce(z);
  if (std::abs(u) < 1e-6) {
    // wp'/wp^2 = -2u + O(u^5); 1/wp = u^2 + O(u^6).
    const Complex d = c_pole_ + u * u;
    return -kI * (-2.0 * u) / (d * d);
  }
  const Complex w = lat_.wp(z);
  const Complex d = 1.0 + c_pole_ * w;
  return -kI * lat_.wp_prime(z) / (d * d);
}

double RoofField::value(Complex z) const {
  return base_value_ + 2.0 * integral_.to(vz_fn(), z).real();
}

double RoofField::value_along(std::span<const Complex> path) const {
  return base_value_ + 2.0 * AnchoredIntegral::along(vz_fn(), path).real();
}

double RoofField::pole_residue() const {
  if (cell_.kind != DomainKind::TypeII) return 0.0;
  const Complex p{0.0, cell_.epsilon};
  const Complex w = lat_.wp(p);
  return (kI * w * w / lat_.wp_prime(p)).real();
}

RoofField build_roof(DomainKind kind, const Lattice& lat,
                     std::optional<double> epsilon) {
  RoofField rf;
  rf.lat_ = lat;
  rf.cell_.kind = kind;
  rf.cell_.omega = lat.omega1().real();
  rf.cell_.height = lat.omega3().imag();
  const Complex w1 = Complex(rf.cell_.omega, 0.5 * rf.cell_.height);
  const Complex w2 = w1 + 2.0 * rf.cell_.omega;

  if (kind == DomainKind::TypeI) {
    const Complex c0 = lat.wp(w1);
    if (std::abs(c0.imag()) > 1e-10 * (1.0 + std::abs(c0))) {
      throw ConstructionError("c0 = wp(w1/2 + w3/2) is not real");
    }
    rf.c0_ = c0.real();
  } else {
    if (!epsilon) {
      throw InvalidArgument("Type II requires epsilon");
    }
    const double eps = *epsilon;
    if (!(eps > 0.0) || !(eps < 0.5 * rf.cell_.height)) {
      std::ostringstream os;
      os << "epsilon must satisfy 0 < epsilon < Im(omega3)/2 = "
         << 0.5 * rf.cell_.height << " (got " << eps << ")";
      throw InvalidArgument(os.str());
    }
    rf.cell_.epsilon = eps;
    const Complex p = lat.wp(Complex(0.0, eps));
    if (!std::isfinite(p.real()) || std::abs(p) < 1e-12) {
      throw ConstructionError("wp(i*epsilon) vanishes; the pole constant c is undefined");
    }
    rf.c_pole_ = -1.0 / p.real();
    const Complex wv = lat.wp(w1);
    if (!(std::abs(rf.c_pole_ * wv) < 1.0)) {
      std::ostringstream os;
      os << "pole constant c = " << rf.c_pole_
         << " is not small: |c*wp(w)| = " << std::abs(rf.c_pole_ * wv)
         << " >= 1";
      throw ConstructionError(os.str());
    }
    rf.c0_ = (wv / (1.0 + rf.c_pole_ * wv)).real();
    rf.residuals_[2] = std::abs(1.0 + rf.c_pole_ * p);
  }
  rf.residuals_[0] = std::abs(rf.vz(w1));
  rf.residuals_[1] = std::abs(rf.vz(w2));
  for (double r : rf.residuals_) {
    if (!(r < 1e-10 * (1.0 + std::abs(rf.c0_)))) {
      std::ostringstream os;
      os << "construction residual " << r << " exceeds 1e-10";
      throw ConstructionError(os.str());
    }
  }

  rf.integral_ = AnchoredIntegral(Router(rf.cell_), rf.vz_fn());
  // The bottom side holds the base point, so its raw constant is 0.
  const double top =
      2.0 * rf.integral_.anchor_value(Router::kAnchorIntervals).real();
  rf.base_value_ = top < 0.0 ? -top : 0.0;
  rf.boundary_ = {rf.base_value_, top + rf.base_value_};
  return rf;
}

}  // namespace qed
