#include "core/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <sstream>

#include "core/errors.hpp"

namespace qed {

namespace {

struct SegmentResult {
  Complex value;
  double error;
  double l1;
};

SegmentResult gauss_kronrod(const ComplexFn& fn, Complex a, Complex b, double rel_tol) {
  const Complex d = b - a;
  auto integrand = [&](double t) { return fn(a + t * d); };
  double error = 0.0;
  double l1 = 0.0;
  const Complex value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      integrand, 0.0, 1.0, 10, rel_tol, &error, &l1);
  return {value * d, error * std::abs(d), l1 * std::abs(d)};
}

bool converged(const SegmentResult& r, double rel_tol) {
  return std::isfinite(r.value.real()) && std::isfinite(r.value.imag()) &&
         r.error <= 100.0 * rel_tol * r.l1 + 1e-300;
}

// The adaptive rule fixes its absolute tolerance from the first coarse
// estimate, which is poor when an endpoint lies close to a pole. Restarting
// on each half lets the halves set their own tolerances.
SegmentResult bisecting(const ComplexFn& fn, Complex a, Complex b, double rel_tol, int depth) {
  SegmentResult r = gauss_kronrod(fn, a, b, rel_tol);
  if (converged(r, rel_tol) || depth == 0) return r;
  const Complex m = 0.5 * (a + b);
  const SegmentResult left = bisecting(fn, a, m, rel_tol, depth - 1);
  const SegmentResult right = bisecting(fn, m, b, rel_tol, depth - 1);
  return {left.value + right.value, left.error + right.error, left.l1 + right.l1};
}

}  // namespace

Complex integrate_segment(const ComplexFn& fn, Complex a, Complex b,
                          double rel_tol) {
  if (std::abs(b - a) == 0.0) return 0.0;
  const SegmentResult r = bisecting(fn, a, b, rel_tol, 12);
  if (!converged(r, rel_tol)) {
    std::ostringstream os;
    os << "adaptive quadrature did not converge on segment (" << a.real()
       << "," << a.imag() << ") -> (" << b.real() << "," << b.imag()
       << "): error estimate " << r.error << ", L1 " << r.l1;
    throw QuadratureError(os.str());
  }
  return r.value;
}

Complex integrate_path(const ComplexFn& fn, std::span<const Complex> path,
                       double rel_tol) {
  Complex sum = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    sum += integrate_segment(fn, path[i - 1], path[i], rel_tol);
  }
  return sum;
}

}  // namespace qed
