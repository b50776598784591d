#include "core/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace qed {

namespace {

double cross(Complex o, Complex a, Complex b) {
  return (a.real() - o.real()) * (b.imag() - o.imag()) -
         (a.imag() - o.imag()) * (b.real() - o.real());
}

bool on_segment(Complex a, Complex b, Complex p) {
  return std::min(a.real(), b.real()) <= p.real() &&
         p.real() <= std::max(a.real(), b.real()) &&
         std::min(a.imag(), b.imag()) <= p.imag() &&
         p.imag() <= std::max(a.imag(), b.imag());
}

int sign(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

double BBox::diagonal() const { return std::hypot(xmax - xmin, ymax - ymin); }

BBox bounding_box(const Polyline& pts) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  BBox b{inf, inf, -inf, -inf};
  for (Complex p : pts) {
    b.xmin = std::min(b.xmin, p.real());
    b.xmax = std::max(b.xmax, p.real());
    b.ymin = std::min(b.ymin, p.imag());
    b.ymax = std::max(b.ymax, p.imag());
  }
  return b;
}

BBox bounding_box(const std::vector<Polyline>& curves) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  BBox b{inf, inf, -inf, -inf};
  for (const Polyline& c : curves) {
    const BBox o = bounding_box(c);
    b.xmin = std::min(b.xmin, o.xmin);
    b.xmax = std::max(b.xmax, o.xmax);
    b.ymin = std::min(b.ymin, o.ymin);
    b.ymax = std::max(b.ymax, o.ymax);
  }
  return b;
}

double diameter(const Polyline& pts) {
  return pts.empty() ? 0.0 : bounding_box(pts).diagonal();
}

bool segments_intersect(Complex a, Complex b, Complex c, Complex d) {
  const int d1 = sign(cross(c, d, a));
  const int d2 = sign(cross(c, d, b));
  const int d3 = sign(cross(a, b, c));
  const int d4 = sign(cross(a, b, d));
  if (d1 * d2 < 0 && d3 * d4 < 0) return true;
  if (d1 == 0 && on_segment(c, d, a)) return true;
  if (d2 == 0 && on_segment(c, d, b)) return true;
  if (d3 == 0 && on_segment(a, b, c)) return true;
  if (d4 == 0 && on_segment(a, b, d)) return true;
  return false;
}

std::optional<Crossing> find_crossing(const std::vector<Polyline>& curves) {
  struct Seg {
    double x0, x1, y0, y1;
    std::size_t curve, index;
    Complex a, b;
  };
  std::vector<Seg> segs;
  std::vector<std::size_t> counts(curves.size(), 0);
  std::vector<bool> closed(curves.size(), false);
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const Polyline& pl = curves[c];
    if (pl.size() < 2) continue;
    closed[c] = pl.size() > 3 && pl.front() == pl.back();
    for (std::size_t i = 0; i + 1 < pl.size(); ++i) {
      const Complex a = pl[i], b = pl[i + 1];
      segs.push_back({std::min(a.real(), b.real()), std::max(a.real(), b.real()),
                      std::min(a.imag(), b.imag()), std::max(a.imag(), b.imag()),
                      c, i, a, b});
    }
    counts[c] = pl.size() - 1;
  }
  std::sort(segs.begin(), segs.end(),
            [](const Seg& p, const Seg& q) { return p.x0 < q.x0; });

  auto neighbours = [&](const Seg& p, const Seg& q) {
    if (p.curve != q.curve) return false;
    const std::size_t lo = std::min(p.index, q.index);
    const std::size_t hi = std::max(p.index, q.index);
    if (hi == lo + 1 || hi == lo) return true;
    return closed[p.curve] && lo == 0 && hi + 1 == counts[p.curve];
  };

  std::vector<std::size_t> active;
  for (std::size_t k = 0; k < segs.size(); ++k) {
    const Seg& s = segs[k];
    std::erase_if(active, [&](std::size_t j) { return segs[j].x1 < s.x0; });
    for (std::size_t j : active) {
      const Seg& t = segs[j];
      if (t.y1 < s.y0 || s.y1 < t.y0) continue;
      if (neighbours(s, t)) continue;
      if (segments_intersect(s.a, s.b, t.a, t.b)) {
        return Crossing{t.curve, t.index, s.curve, s.index};
      }
    }
    active.push_back(k);
  }
  return std::nullopt;
}

int winding_number(const Polyline& loop, Complex p) {
  if (loop.size() < 3) return 0;
  double total = 0.0;
  const std::size_t n = loop.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Complex a = loop[i] - p;
    const Complex b = loop[(i + 1) % n] - p;
    total += std::arg(b / a);
  }
  return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

}  // namespace qed
