#include "core/mapping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "core/errors.hpp"
#include "core/parallel.hpp"

namespace qed {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

const char* kind_name(DomainKind kind) {
  return kind == DomainKind::TypeI ? "i" : "ii";
}

const char* normalization_name(Normalization n) {
  return n == Normalization::NeumannUnit ? "neumann-unit" : "raw-sigma-ratio";
}

std::vector<std::string> validate_spec(const DomainSpec& spec) {
  std::vector<std::string> warnings;
  if (!(spec.omega > 0.0) || !std::isfinite(spec.omega)) {
    throw InvalidArgument("omega must be a positive finite number");
  }
  if (!(spec.omega_prime_imag > 0.0) || !std::isfinite(spec.omega_prime_imag)) {
    throw InvalidArgument("Im omega' must be a positive finite number");
  }
  if (spec.samples_per_side < 64 || spec.samples_per_side > (1 << 20)) {
    throw InvalidArgument("samples per side must lie in [64, 1048576]");
  }
  if (spec.kind == DomainKind::TypeII) {
    if (!spec.epsilon) {
      throw InvalidArgument("Type II requires epsilon with 0 < epsilon < Im(omega')/2");
    }
    const double eps = *spec.epsilon;
    if (!(eps > 0.0) || !(eps < 0.5 * spec.omega_prime_imag)) {
      std::ostringstream os;
      os << "epsilon = " << eps << " violates 0 < epsilon < Im(omega')/2 = "
         << 0.5 * spec.omega_prime_imag;
      throw InvalidArgument(os.str());
    }
  }
  if (!(spec.omega_prime_imag > spec.omega)) {
    std::ostringstream os;
    os << "Im omega' = " << spec.omega_prime_imag
       << " does not exceed omega = " << spec.omega
       << " (aspect condition omega'/i > omega)";
    if (spec.normalization == Normalization::RawSigmaRatio) {
      throw InvalidArgument(os.str());
    }
    warnings.push_back(os.str());
  }
  return warnings;
}

double ConstructedMap::singular_distance(Complex z) const {
  const Lattice& lat = roof_.lattice();
  if (cell().kind == DomainKind::TypeI) return lat.distance_to_lattice(z);
  const Complex p{0.0, cell().epsilon};
  return std::min(lat.distance_to_lattice(z - p), lat.distance_to_lattice(z + p));
}

Complex ConstructedMap::F_sigma_raw(Complex z) const {
  const Lattice& s = bfac_.lattice();
  const double w = cell().omega;
  const Complex wp = cell().omega3();
  const Complex a = s.sigma(z - w + 0.5 * wp);
  const Complex b = s.sigma(z - 3.0 * w + 0.5 * wp);
  const Complex num = a * a * b * b;
  if (cell().kind == DomainKind::TypeI) {
    const Complex c = s.sigma(z);
    return num / (c * c * s.sigma(z - 2.0 * w) * s.sigma(z - 6.0 * w + 2.0 * wp));
  }
  const Complex ie{0.0, cell().epsilon};
  return num / (s.sigma(z - ie) * s.sigma(z + ie) * s.sigma(z - 2.0 * w - ie) *
                s.sigma(z - 6.0 * w + ie + 2.0 * wp));
}

Complex ConstructedMap::F(Complex z) const {
  const double d = singular_distance(z);
  if (d < Lattice::kPoleGuard) {
    std::ostringstream os;
    os << "F: argument (" << z.real() << ", " << z.imag() << ") is within "
       << d << " of a pole";
    throw PoleError(os.str());
  }
  return factor_ * F_sigma_raw(z);
}

Complex ConstructedMap::F_product(Complex z) const {
  return scale_ * roof_.vz(z) * bfac_.eval(z);
}

double ConstructedMap::gradient_modulus(Complex z) const {
  return std::abs(2.0 * roof_.vz(z) / F_unit(z));
}

Complex ConstructedMap::f(Complex z) const { return f_anchor_.to(F_fn(), z); }

Complex ConstructedMap::f_along(std::span<const Complex> path) const {
  return integrate_path(F_fn(), path);
}

ConstructedMap build_map(const DomainSpec& spec) {
  ConstructedMap cm;
  cm.warnings_ = validate_spec(spec);
  cm.spec_ = spec;
  const Lattice roof_lat =
      lattice_build(spec.omega, spec.omega_prime_imag, LatticeKind::Roof);
  const Lattice sigma_lat =
      lattice_build(spec.omega, spec.omega_prime_imag, LatticeKind::Sigma);
  cm.roof_ = build_roof(spec.kind, roof_lat,
                        spec.kind == DomainKind::TypeII ? spec.epsilon
                                                        : std::nullopt);
  cm.bfac_ = build_b(sigma_lat);

  // The two closed forms of F must differ by one constant.
  const PeriodCell& cell = cm.cell();
  const double keep_out = 0.05 * std::min(cell.omega, cell.height);
  std::mt19937_64 rng(0x51f0a7c3ULL);
  std::vector<Complex> ratios;
  while (ratios.size() < 100) {
    const Complex z{cell.width() * uniform01(rng), cell.height * uniform01(rng)};
    if (cm.singular_distance(z) < keep_out || cm.bfac_.pole_distance(z) < keep_out) {
      continue;
    }
    ratios.push_back(cm.F_sigma_raw(z) / (cm.roof_.vz(z) * cm.bfac_.eval(z)));
  }
  Complex mean = 0.0;
  for (Complex r : ratios) mean += r;
  mean /= static_cast<double>(ratios.size());
  double var = 0.0;
  for (Complex r : ratios) var += std::norm(r - mean);
  var /= static_cast<double>(ratios.size());
  cm.lambda_ = mean;
  cm.spread_ = std::sqrt(var) / std::abs(mean);
  cm.spread_samples_ = static_cast<int>(ratios.size());
  if (!(cm.spread_ < 1e-7)) {
    std::ostringstream os;
    os << "sigma-quotient and product forms of F disagree: relative spread "
       << cm.spread_ << " >= 1e-7";
    throw ConstructionError(os.str());
  }
  cm.scale_ = spec.normalization == Normalization::NeumannUnit ? Complex(2.0, 0.0)
                                                               : cm.lambda_;
  cm.factor_ = cm.scale_ / cm.lambda_;

  if (spec.kind == DomainKind::TypeII) {
    const Complex ie{0.0, cell.epsilon};
    const Complex res = cm.scale_ * cm.roof_.pole_residue() * cm.bfac_.eval(ie);
    cm.period_ = 2.0 * kPi * kI * res;
    cm.alignment_ = std::conj(cm.period_) / std::abs(cm.period_);
  } else {
    cm.alignment_ = std::abs(cm.scale_) / cm.scale_;
  }
  cm.f_anchor_ = AnchoredIntegral(Router(cell), cm.F_fn());
  return cm;
}

ZeroPeriodResult zero_period_check(const ConstructedMap& cm, double y,
                                   bool perturb) {
  const PeriodCell& cell = cm.cell();
  if (!(y > 0.0) || !(y < cell.height)) {
    throw InvalidArgument("zero-period height must lie strictly inside (0, Im omega3)");
  }
  if (cell.kind == DomainKind::TypeII && std::abs(y - cell.epsilon) < 1e-6 * cell.height) {
    throw InvalidArgument("zero-period line passes through the pole row");
  }
  const double omega1 = 2.0 * cell.omega;
  ComplexFn fn = cm.F_fn();
  if (perturb) {
    fn = [&cm, omega1](Complex z) {
      return cm.F(z) * (1.0 + 0.01 * std::sin(kPi * z.real() / omega1));
    };
  }
  constexpr int kPieces = 16;
  const double len = cell.width();
  Complex total = 0.0;
  for (int k = 0; k < kPieces; ++k) {
    total += integrate_segment(fn, Complex(len * k / kPieces, y),
                               Complex(len * (k + 1) / kPieces, y));
  }
  double max_f = 0.0;
  constexpr int kProbe = 1024;
  for (int k = 0; k < kProbe; ++k) {
    max_f = std::max(max_f, std::abs(cm.F(Complex(len * (k + 0.5) / kProbe, y))));
  }
  ZeroPeriodResult r{};
  r.y = y;
  r.residual = std::abs(total);
  r.max_abs_F = max_f;
  r.tolerance = 1e-8 * len * max_f;
  r.pass = r.residual < r.tolerance;
  return r;
}

std::vector<double> clustered_samples(double a, double b, std::size_t n) {
  std::vector<double> xs(n);
  if (n == 1) {
    xs[0] = 0.5 * (a + b);
    return xs;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(n - 1);
    xs[k] = a + (b - a) * 0.5 * (1.0 - std::cos(kPi * t));
  }
  if (n % 2 == 1) xs[n / 2] = 0.5 * (a + b);
  xs.front() = a;
  xs.back() = b;
  return xs;
}

std::vector<Complex> side_image(const ConstructedMap& cm, double y,
                                const std::vector<double>& xs,
                                std::size_t anchor) {
  const std::size_t n = xs.size();
  if (n == 0) return {};
  if (anchor >= n) throw InvalidArgument("side_image: anchor index out of range");
  std::vector<Complex> seg(n > 0 ? n - 1 : 0);
  const ComplexFn fn = cm.F_fn();
  parallel_for(seg.size(), [&](std::size_t i) {
    seg[i] = integrate_segment(fn, Complex(xs[i], y), Complex(xs[i + 1], y));
  });
  std::vector<Complex> out(n);
  out[anchor] = cm.f(Complex(xs[anchor], y));
  for (std::size_t i = anchor; i + 1 < n; ++i) out[i + 1] = out[i] + seg[i];
  for (std::size_t i = anchor; i > 0; --i) out[i - 1] = out[i] - seg[i - 1];
  const Complex a = cm.alignment();
  for (Complex& p : out) p *= a;
  return out;
}

namespace {

TraceCurve closed_side(const ConstructedMap& cm, double y, int n,
                       const std::string& label) {
  const double w = cm.cell().omega;
  std::vector<double> xs(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) xs[k] = 4.0 * w * k / n;
  xs.back() = 4.0 * w;
  const std::size_t anchor = static_cast<std::size_t>(std::lround(n / 4.0));
  TraceCurve c;
  c.label = label;
  c.points = side_image(cm, y, xs, anchor);
  const double diam = diameter(c.points);
  c.closure_gap = std::abs(c.points.back() - c.points.front()) /
                  (diam > 0.0 ? diam : 1.0);
  c.closed = c.closure_gap < 1e-6;
  if (c.closed) c.points.back() = c.points.front();
  return c;
}

}  // namespace

BoundaryTrace trace_boundary(const ConstructedMap& cm, int samples_per_side) {
  const int n = samples_per_side > 0 ? samples_per_side : cm.spec().samples_per_side;
  if (n < 8) throw InvalidArgument("trace needs at least 8 samples per side");
  const PeriodCell& cell = cm.cell();
  BoundaryTrace tr;
  tr.kind = cell.kind;
  tr.samples_per_side = n;
  tr.period = cm.alignment() * cm.period();
  if (cell.kind == DomainKind::TypeII) {
    tr.curves.push_back(closed_side(cm, 0.0, n, "bubble_0"));
    tr.curves.push_back(closed_side(cm, cell.height, n, "bubble_1"));
    return tr;
  }
  tr.curves.push_back(closed_side(cm, cell.height, n, "top_closed"));
  const double w = cell.omega;
  const double cut = 1e-4 * w;
  tr.cutoff = cut;
  const std::size_t m = static_cast<std::size_t>(n / 2) | 1u;
  const char* labels[] = {"bottom_left_arc", "bottom_right_arc"};
  for (int side = 0; side < 2; ++side) {
    const double x0 = 2.0 * w * side;
    TraceCurve c;
    c.label = labels[side];
    c.points = side_image(cm, 0.0, clustered_samples(x0 + cut, x0 + 2.0 * w - cut, m), m / 2);
    c.unbounded = true;
    c.closure_gap = std::abs(c.points.back() - c.points.front()) /
                    std::max(diameter(c.points), 1e-300);
    tr.curves.push_back(std::move(c));
  }
  return tr;
}

MirrorResult mirror_residual(const std::vector<Complex>& side, bool vertical_axis) {
  MirrorResult r{0.0, 0.0};
  std::vector<Complex> pts = side;
  if (!vertical_axis) {
    for (Complex& p : pts) p *= kI;
  }
  const std::size_t n = pts.size();
  if (n < 3) return r;
  const std::size_t last = n - 1;
  double s = 0.0;
  for (std::size_t k = 0; k <= last; ++k) {
    s += (pts[last - k] + std::conj(pts[k])).real();
  }
  s /= static_cast<double>(n);
  double worst = 0.0;
  for (std::size_t k = 0; k <= last; ++k) {
    worst = std::max(worst, std::abs(pts[last - k] + std::conj(pts[k]) - s));
  }
  const double diam = diameter(pts);
  r.residual = worst / (diam > 0.0 ? diam : 1.0);
  r.axis = 0.5 * s;
  return r;
}

std::vector<ClaimResult> check_claims(const ConstructedMap& cm, int samples_per_side) {
  if (cm.cell().kind != DomainKind::TypeI) {
    throw InvalidArgument("claims 1-6 concern the Type I construction");
  }
  const int n = samples_per_side > 0 ? samples_per_side : cm.spec().samples_per_side;
  const std::size_t K = static_cast<std::size_t>(std::max(64, n / 4));
  const double w = cm.cell().omega;
  const double h = cm.cell().height;

  std::vector<double> xs(4 * K + 1);
  for (std::size_t k = 0; k <= 4 * K; ++k) xs[k] = w * static_cast<double>(k) / K;
  const std::vector<Complex> top = side_image(cm, h, xs, K);
  const double cut = 1e-4 * w;
  const std::size_t m = 2 * K + 1;
  const std::vector<Complex> left =
      side_image(cm, 0.0, clustered_samples(cut, 2.0 * w - cut, m), K);
  const std::vector<Complex> right =
      side_image(cm, 0.0, clustered_samples(2.0 * w + cut, 4.0 * w - cut, m), K);
  const double diam = diameter(top);

  auto min_step = [](const std::vector<Complex>& v, std::size_t i0, std::size_t i1,
                     double dir) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = i0; i < i1; ++i) {
      best = std::min(best, dir * (v[i + 1].real() - v[i].real()));
    }
    return best;
  };
  // Margin by which index `at` is the strict extremum of Im over [i0, i1],
  // ignoring its immediate neighbours; dir = +1 for a maximum.
  auto extremum_margin = [](const std::vector<Complex>& v, std::size_t i0,
                            std::size_t i1, std::size_t at, double dir) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = i0; i <= i1; ++i) {
      if (i + 1 >= at && i <= at + 1) continue;
      best = std::min(best, dir * (v[at].imag() - v[i].imag()));
    }
    // The sample extremum must also sit within one step of `at`.
    std::size_t arg = i0;
    for (std::size_t i = i0; i <= i1; ++i) {
      if (dir * v[i].imag() > dir * v[arg].imag()) arg = i;
    }
    if (arg + 1 < at || arg > at + 1) best = std::min(best, -1.0);
    return best;
  };

  std::vector<ClaimResult> out;
  auto add = [&](int claim, const std::string& text, double margin, int samples) {
    const double rel = margin / diam;
    out.push_back({claim, text, rel, rel > 0.0, samples});
  };
  const int nt = static_cast<int>(top.size());
  const int nb = static_cast<int>(left.size() + right.size());

  add(1, "Re f increasing on [w', w'+2w] and decreasing on [w'+2w, w'+4w]",
      std::min(min_step(top, 0, 2 * K, 1.0), min_step(top, 2 * K, 4 * K, -1.0)), nt);

  {
    const double ref = top[0].imag();
    double m2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < 2 * K; ++i) m2 = std::min(m2, ref - top[i].imag());
    for (std::size_t i = 2 * K + 1; i < 4 * K; ++i) m2 = std::min(m2, top[i].imag() - ref);
    add(2, "Im f < Im f(w') on (w', w'+2w) and Im f > Im f(w') on (w'+2w, w'+4w)", m2, nt);
  }
  add(3, "Im f on [w', w'+4w] has its minimum at w'+w and its maximum at w'+3w",
      std::min(extremum_margin(top, 0, 4 * K, K, -1.0),
               extremum_margin(top, 0, 4 * K, 3 * K, 1.0)), nt);
  add(4, "Re f increasing on [0, 2w] and decreasing on [2w, 4w]",
      std::min(min_step(left, 0, m - 1, 1.0), min_step(right, 0, m - 1, -1.0)), nb);
  add(5, "Im f attains its maximum on [0, 2w] at w and its minimum on [2w, 4w] at 3w",
      std::min(extremum_margin(left, 0, m - 1, K, 1.0),
               extremum_margin(right, 0, m - 1, K, -1.0)), nb);
  {
    const double a = left[K].imag(), b = top[K].imag(), c = top[3 * K].imag(),
                 d = right[K].imag();
    add(6, "Im f(w) < Im f(w'+w) < Im f(w'+3w) < Im f(3w)",
        std::min({b - a, c - b, d - c}), 4);
  }
  return out;
}

TopologyResult classify_topology(const BoundaryTrace& trace) {
  TopologyResult t;
  std::vector<const TraceCurve*> closed;
  std::vector<const TraceCurve*> open;
  for (const TraceCurve& c : trace.curves) {
    (c.closed ? closed : open).push_back(&c);
  }
  t.closed_curves = static_cast<int>(closed.size());
  t.open_arcs = static_cast<int>(open.size());
  std::ostringstream os;
  os << t.closed_curves << " closed curve(s), " << t.open_arcs << " open arc(s)";
  if (trace.kind == DomainKind::TypeII) {
    t.expected = t.closed_curves == 2 && t.open_arcs == 0;
    os << " per period";
  } else {
    t.expected = t.closed_curves == 1 && t.open_arcs == 2;
    if (t.expected) {
      // Both ends of each arc must run far away from the bounded component.
      const TraceCurve& top = *closed.front();
      const BBox box = bounding_box(top.points);
      const Complex centre{0.5 * (box.xmin + box.xmax), 0.5 * (box.ymin + box.ymax)};
      const double d = box.diagonal();
      for (const TraceCurve* arc : open) {
        const double r = std::min(std::abs(arc->points.front() - centre),
                                  std::abs(arc->points.back() - centre));
        if (!(r > 10.0 * d)) t.expected = false;
      }
      if (!t.expected) os << "; an arc does not escape to infinity";
    }
  }
  t.description = os.str();
  return t;
}

std::optional<Crossing> trace_crossing(const BoundaryTrace& trace) {
  std::vector<Polyline> curves;
  for (const TraceCurve& c : trace.curves) curves.push_back(c.points);
  if (trace.kind == DomainKind::TypeII) {
    const std::size_t base = curves.size();
    for (double shift : {-1.0, 1.0}) {
      for (std::size_t i = 0; i < base; ++i) {
        Polyline p = curves[i];
        for (Complex& z : p) z += shift * trace.period;
        curves.push_back(std::move(p));
      }
    }
  }
  return find_crossing(curves);
}

}  // namespace qed
