#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "core/elliptic.hpp"

namespace qed {

using Polyline = std::vector<Complex>;

struct BBox {
  double xmin, ymin, xmax, ymax;
  double diagonal() const;
};

BBox bounding_box(const Polyline& pts);
BBox bounding_box(const std::vector<Polyline>& curves);
double diameter(const Polyline& pts);  // bounding-box diagonal

// Proper or touching intersection of closed segments [a, b] and [c, d].
bool segments_intersect(Complex a, Complex b, Complex c, Complex d);

struct Crossing {
  std::size_t curve_a, segment_a, curve_b, segment_b;
};

// Sweep over segments sorted by their left end, testing only pairs whose
// x-ranges overlap. Consecutive segments of one curve (and the wrap-around
// pair of a closed curve) share a vertex and are not tested against each
// other. Returns the first crossing found, if any.
std::optional<Crossing> find_crossing(const std::vector<Polyline>& curves);

// Winding number of a closed polyline around p (the polyline is closed
// implicitly if the last point differs from the first).
int winding_number(const Polyline& loop, Complex p);

}  // namespace qed
