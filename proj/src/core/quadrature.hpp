#pragma once

#include <functional>
#include <span>

#include "core/elliptic.hpp"

namespace qed {

using ComplexFn = std::function<Complex(Complex)>;

// Default relative tolerance per segment.
inline constexpr double kSegmentTolerance = 1e-10;

// Integral of fn(z) dz along the straight segment from a to b, by adaptive
// Gauss-Kronrod (7/15). Throws QuadratureError when the error estimate stays
// above tolerance or the result is not finite; PoleError from fn propagates.
Complex integrate_segment(const ComplexFn& fn, Complex a, Complex b,
                          double rel_tol = kSegmentTolerance);

// Sum of integrate_segment over consecutive vertices of a polyline.
Complex integrate_path(const ComplexFn& fn, std::span<const Complex> path,
                       double rel_tol = kSegmentTolerance);

}  // namespace qed
