#include "core/verify.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <map>
#include "json.hpp"
#include <numbers>
#include <random>

#include "core/errors.hpp"
#include "core/flow.hpp"
#include "core/io.hpp"
#include "core/parallel.hpp"

namespace qed {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};
constexpr double kInf = std::numeric_limits<double>::infinity();

using Records = std::vector<CheckRecord>;

class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t salt)
      : gen_(seed ^ (salt * 0x9E3779B97F4A7C15ULL)) {}
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

 private:
  std::mt19937_64 gen_;
};

bool compare(double r, double t, Comparison c) {
  switch (c) {
    case Comparison::Less: return r < t;
    case Comparison::LessEqual: return r <= t;
    case Comparison::Greater: return r > t;
    case Comparison::GreaterEqual: return r >= t;
  }
  return false;
}

CheckRecord make(std::string name, std::string anchor, double residual, double tol,
                 Comparison cmp, long samples, std::string note = {}) {
  CheckRecord r;
  r.name = std::move(name);
  r.anchor = std::move(anchor);
  r.residual = residual;
  r.tolerance = tol;
  r.comparison = cmp;
  r.samples = samples;
  r.pass = std::isfinite(residual) && compare(residual, tol, cmp);
  r.note = std::move(note);
  return r;
}

CheckRecord skip(std::string name, std::string anchor, double tol, Comparison cmp,
                 std::string note) {
  CheckRecord r;
  r.name = std::move(name);
  r.anchor = std::move(anchor);
  r.tolerance = tol;
  r.comparison = cmp;
  r.skipped = true;
  r.pass = true;
  r.note = std::move(note);
  return r;
}

// Failure of the computation behind a check is itself a failed check.
Records guarded(const std::vector<std::string>& names, const std::function<Records()>& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    Records out;
    for (const std::string& n : names) {
      CheckRecord r;
      r.name = n;
      r.anchor = "computation failed";
      r.residual = kInf;
      r.pass = false;
      r.note = e.what();
      out.push_back(r);
    }
    return out;
  }
}

// Winding number (as a real) of g around a closed polygon: the contour
// integral of g'/g divided by 2*pi*i.
double winding(const std::function<Complex(Complex)>& g,
               const std::function<Complex(Complex)>& dg,
               const std::vector<Complex>& polygon) {
  const ComplexFn ratio = [&](Complex z) { return dg(z) / g(z); };
  Complex total = 0.0;
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    total += integrate_segment(ratio, polygon[i], polygon[(i + 1) % polygon.size()]);
  }
  return (total / (2.0 * kPi * kI)).real();
}

std::vector<Complex> circle(Complex c, double r, int n = 64) {
  std::vector<Complex> out(n);
  for (int k = 0; k < n; ++k) out[k] = c + r * std::polar(1.0, 2.0 * kPi * k / n);
  return out;
}

std::vector<Complex> rectangle(double x0, double x1, double y0, double y1) {
  return {Complex(x0, y0), Complex(x1, y0), Complex(x1, y1), Complex(x0, y1)};
}

// ---------------------------------------------------------------- kernel

Records kernel_records(const std::vector<Lattice>& lattices, std::uint64_t seed,
                       int points) {
  double ode = 0, legendre = 0, qp = 0, period = 0, parity = 0, conj = 0;
  long n = 0;
  std::uint64_t salt = 1;
  for (const Lattice& lat : lattices) {
    Rng rng(seed, salt++);
    const double a = lat.omega1().real();
    const double b = lat.omega3().imag();
    legendre = std::max(legendre, std::abs(lat.eta1() * lat.omega3() -
                                           lat.eta3() * lat.omega1() - kI * kPi / 2.0));
    const auto gens = lat.generators();
    const Complex halves[2] = {lat.omega1(), lat.omega3()};
    const Complex etas[2] = {lat.eta1(), lat.eta3()};
    int got = 0;
    while (got < points) {
      const Complex z{rng.uniform(-a, a), rng.uniform(-b, b)};
      if (lat.distance_to_lattice(z) < 0.05 * std::min(a, b)) continue;
      ++got;
      const Complex p = lat.wp(z);
      const Complex dp = lat.wp_prime(z);
      const double mag = 1.0 + std::abs(p);
      ode = std::max(ode, std::abs(dp * dp - (4.0 * p * p * p - lat.g2() * p - lat.g3())) /
                              (mag * mag * mag));
      const Complex s = lat.sigma(z);
      for (int k = 0; k < 2; ++k) {
        const Complex shifted = lat.sigma(z + 2.0 * halves[k]);
        const Complex expect = -s * std::exp(2.0 * etas[k] * (z + halves[k]));
        qp = std::max(qp, std::abs(shifted - expect) / std::abs(shifted));
        period = std::max(period, std::abs(lat.wp(z + gens[k]) - p) / mag);
      }
      parity = std::max({parity, std::abs(lat.wp(-z) - p) / mag,
                         std::abs(lat.wp_prime(-z) + dp) / (1.0 + std::abs(dp)),
                         std::abs(lat.sigma(-z) + s) / (1.0 + std::abs(s))});
      conj = std::max({conj, std::abs(lat.wp(std::conj(z)) - std::conj(p)) / mag,
                       std::abs(lat.sigma(std::conj(z)) - std::conj(s)) / (1.0 + std::abs(s))});
    }
    n += got;
  }
  const long m = static_cast<long>(lattices.size());
  return {
      make("elliptic_wp_ode", "wp'^2 = 4 wp^3 - g2 wp - g3, residual / (1 + |wp|)^3",
           ode, 1e-9, Comparison::Less, n),
      make("elliptic_legendre", "eta1 omega3 - eta3 omega1 = i pi / 2", legendre, 1e-12,
           Comparison::Less, m),
      make("elliptic_sigma_quasi_periodicity",
           "sigma(z + 2 omega_k) = -exp(2 eta_k (z + omega_k)) sigma(z), relative", qp, 1e-9,
           Comparison::Less, 2 * n),
      make("elliptic_wp_periodicity", "wp(z + 2 omega_k) = wp(z), relative to 1 + |wp|",
           period, 1e-10, Comparison::Less, 2 * n),
      make("elliptic_parity", "wp even, wp' and sigma odd", parity, 1e-12,
           Comparison::Less, n),
      make("elliptic_conjugation", "wp(conj z) = conj wp(z), sigma(conj z) = conj sigma(z)",
           conj, 1e-10, Comparison::Less, n),
  };
}

// ------------------------------------------------------------------ roof

Records roof_records(const ConstructedMap& cm, std::uint64_t seed) {
  const RoofField& roof = cm.roof();
  const PeriodCell& cell = cm.cell();
  const double w = cell.omega, h = cell.height;
  Records out;
  const auto res = roof.construction_residuals();
  out.push_back(make("roof_construction",
                     "v_z vanishes at both critical points; Type II: 1 + c wp(i eps) = 0",
                     *std::max_element(res.begin(), res.end()), 1e-10, Comparison::Less, 3));

  {
    const auto bc = roof.boundary_constants();
    double worst = 0.0;
    long n = 0;
    for (int k = 0; k < 64; ++k) {
      const double x = cell.width() * (k + 0.5) / 64.0;
      const double to_pole = std::abs(std::remainder(x, 2.0 * w));
      if (cell.kind == DomainKind::TypeI && to_pole < 0.02 * w) continue;
      worst = std::max(worst, std::abs(roof.value(Complex(x, 0.0)) - bc[0]));
      worst = std::max(worst, std::abs(roof.value(Complex(x, h)) - bc[1]));
      n += 2;
    }
    out.push_back(make("roof_boundary_constants", "v is constant on each horizontal side",
                       worst, 1e-8, Comparison::Less, n));
  }

  {
    Rng rng(seed, 101);
    double worst = 0.0;
    int got = 0;
    const double step = 1e-5;
    while (got < 500) {
      const Complex z{rng.uniform(0.0, cell.width()), rng.uniform(0.0, h)};
      if (cm.singular_distance(z) < 0.05 * std::min(w, h)) continue;
      ++got;
      const Complex dx = roof.vz(z + step) - roof.vz(z - step);
      const Complex dy = roof.vz(z + kI * step) - roof.vz(z - kI * step);
      const Complex dzbar = (dx + kI * dy) / (4.0 * step);
      worst = std::max(worst, std::abs(dzbar) / (1.0 + std::abs(roof.vz_prime(z))));
    }
    out.push_back(make("roof_harmonicity",
                       "Cauchy-Riemann residual of v_z by central differences", worst, 1e-6,
                       Comparison::Less, got));
  }

  {
    double worst = 0.0;
    const ComplexFn vz = roof.vz_fn();
    long n = 0;
    for (double t : {0.3, 0.7, 0.9}) {
      double y = t * h;
      if (cell.kind == DomainKind::TypeII && std::abs(y - cell.epsilon) < 0.05 * h) y += 0.1 * h;
      Complex total = 0.0;
      for (int k = 0; k < 16; ++k) {
        total += integrate_segment(vz, Complex(cell.width() * k / 16, y),
                                   Complex(cell.width() * (k + 1) / 16, y));
      }
      worst = std::max(worst, std::abs(total.real()));
      ++n;
    }
    out.push_back(make("roof_period_purity",
                       "Re of the integral of v_z over a horizontal period vanishes", worst,
                       1e-8, Comparison::Less, n));
  }

  if (cell.kind == DomainKind::TypeII) {
    // v ~ 2 r log|z - i eps| near the pole.
    const Complex p{0.0, cell.epsilon};
    const Complex dir = std::polar(1.0, kPi / 4.0);
    std::vector<double> lx, ly;
    for (double t : {1e-2, 1e-3, 1e-4, 1e-5}) {
      lx.push_back(std::log(t));
      ly.push_back(roof.value(p + t * dir));
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      mx += lx[i];
      my += ly[i];
    }
    mx /= lx.size();
    my /= ly.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxy += (lx[i] - mx) * (ly[i] - my);
      sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    const double slope = sxy / sxx;
    const double expected = 2.0 * roof.pole_residue();
    out.push_back(make("roof_log_pole_growth",
                       "v grows like -a log|z - i eps| with a = -2 Res v_z, fit within 5%",
                       std::abs(slope / expected - 1.0), 0.05, Comparison::Less, 4));
  } else {
    out.push_back(skip("roof_log_pole_growth", "logarithmic poles of v", 0.05,
                       Comparison::Less, "Type II only"));
  }
  return out;
}

// ------------------------------------------------------------- B factor

Records b_records(const ConstructedMap& cm, std::uint64_t seed, int samples) {
  const BFactor& b = cm.bfac();
  const PeriodCell& cell = cm.cell();
  const double w = cell.omega, h = cell.height;
  Rng rng(seed, 201);
  double real = 0, top = 0, anti = 0, conj = 0;
  for (int k = 0; k < samples; ++k) {
    const double x = rng.uniform(0.0, cell.width());
    real = std::max(real, std::abs(std::abs(b.eval(Complex(x, 0.0))) - 1.0));
    top = std::max(top, std::abs(std::abs(b.eval(Complex(x, h))) - 1.0));
  }
  int got = 0;
  while (got < samples) {
    const Complex z{rng.uniform(0.0, cell.width()), rng.uniform(-h, h)};
    if (b.pole_distance(z) < 0.05 * std::min(w, h) ||
        b.pole_distance(std::conj(z)) < 0.05 * std::min(w, h)) {
      continue;
    }
    ++got;
    const Complex bz = b.eval(z);
    anti = std::max(anti, std::abs(b.eval(z + 2.0 * w) + bz) / std::abs(bz));
    conj = std::max(conj, std::abs(b.eval(std::conj(z)) * std::conj(bz) - 1.0));
  }
  double min_mod = kInf;
  for (int i = 0; i < 50; ++i) {
    for (int j = 0; j < 50; ++j) {
      const Complex z{cell.width() * (i + 0.5) / 50.0, h * (j + 0.5) / 50.0};
      if (b.pole_distance(z) < 1e-9) continue;
      min_mod = std::min(min_mod, std::abs(b.eval(z)));
    }
  }
  return {
      make("b_factor_unit_modulus_real", "|B(x)| = 1 for real x", real, 1e-9,
           Comparison::Less, samples),
      make("b_factor_unit_modulus_top", "|B(x + omega3)| = 1 on the top side", top, 1e-9,
           Comparison::Less, samples),
      make("b_factor_antiperiod", "B(z + omega_1) = -B(z), relative", anti, 1e-9,
           Comparison::Less, samples),
      make("b_factor_conjugation", "B(conj z) conj B(z) = 1", conj, 1e-9, Comparison::Less,
           samples),
      make("b_factor_exterior", "min |B| over a 50 x 50 grid of G is at least 1 - 1e-6",
           min_mod, 1.0 - 1e-6, Comparison::GreaterEqual, 2500),
  };
}

// ----------------------------------------------- cross form, zero period

Records form_records(const ConstructedMap& cm, std::uint64_t seed, bool inject) {
  const PeriodCell& cell = cm.cell();
  const double w = cell.omega, h = cell.height;
  Records out;
  {
    Rng rng(seed, 301);
    std::vector<Complex> ratios;
    while (ratios.size() < 100) {
      const Complex z{rng.uniform(0.0, cell.width()), rng.uniform(0.0, h)};
      const double keep = 0.05 * std::min(w, h);
      if (cm.singular_distance(z) < keep || cm.bfac().pole_distance(z) < keep) continue;
      ratios.push_back(cm.F_sigma_raw(z) / (cm.roof().vz(z) * cm.bfac().eval(z)));
    }
    Complex mean = 0.0;
    for (Complex r : ratios) mean += r;
    mean /= static_cast<double>(ratios.size());
    double var = 0.0;
    for (Complex r : ratios) var += std::norm(r - mean);
    const double spread = std::sqrt(var / ratios.size()) / std::abs(mean);
    out.push_back(make("cross_form_consistency",
                       "sigma-quotient F / (v_z B) is constant: std / |mean|", spread, 1e-7,
                       Comparison::Less, static_cast<long>(ratios.size())));
  }
  {
    double worst = 0.0, control = kInf;
    for (int k = 0; k < 10; ++k) {
      double y = h * (k + 1) / 11.0;
      if (cell.kind == DomainKind::TypeII && std::abs(y - cell.epsilon) < 0.02 * h) {
        y += 0.04 * h;
      }
      const ZeroPeriodResult r = zero_period_check(cm, y, inject);
      worst = std::max(worst, r.residual / (r.tolerance / 1e-8));
      const ZeroPeriodResult neg = zero_period_check(cm, y, true);
      control = std::min(control, neg.residual / neg.tolerance);
    }
    out.push_back(make("zero_period",
                       "int over one period of F(x + iy) dx = 0, relative to length * max|F|",
                       worst, 1e-8, Comparison::Less, 10,
                       inject ? "integrand perturbed on request" : ""));
    out.push_back(make("zero_period_negative_control",
                       "perturbed integrand F (1 + 0.01 sin(pi x / omega_1)) exceeds tolerance",
                       control, 1e3, Comparison::GreaterEqual, 10));
  }
  return out;
}

// -------------------------------------------------------------- tracing

Records trace_records(const ConstructedMap& cm) {
  const BoundaryTrace tr = trace_boundary(cm);
  Records out;
  double gap = 0.0, mirror = 0.0;
  long closed = 0;
  const bool vertical = cm.cell().kind == DomainKind::TypeII;
  for (const TraceCurve& c : tr.curves) {
    if (c.unbounded) continue;
    gap = std::max(gap, c.closure_gap);
    mirror = std::max(mirror, mirror_residual(c.points, vertical).residual);
    ++closed;
  }
  out.push_back(make("boundary_closure", "images of closed sides close up, gap / diameter",
                     gap, 1e-6, Comparison::Less, closed));
  out.push_back(make("boundary_mirror_symmetry",
                     "closed boundary curves are mirror symmetric, residual / diameter", mirror,
                     1e-6, Comparison::Less, closed));
  const auto crossing = trace_crossing(tr);
  long segs = 0;
  for (const TraceCurve& c : tr.curves) segs += static_cast<long>(c.points.size());
  out.push_back(make("boundary_self_intersection",
                     "boundary polylines (with neighbouring periods) do not cross",
                     crossing ? 1.0 : 0.0, 0.0, Comparison::LessEqual, segs,
                     crossing ? "crossing between curves " + std::to_string(crossing->curve_a) +
                                    " and " + std::to_string(crossing->curve_b)
                              : ""));
  const TopologyResult topo = classify_topology(tr);
  out.push_back(make("topology",
                     vertical ? "two closed curves per period"
                              : "one closed curve and two unbounded arcs",
                     topo.expected ? 0.0 : 1.0, 0.0, Comparison::LessEqual,
                     static_cast<long>(tr.curves.size()), topo.description));
  return out;
}

Records claim_records(const ConstructedMap& cm) {
  Records out;
  if (cm.cell().kind != DomainKind::TypeI) {
    for (int k = 1; k <= 6; ++k) {
      out.push_back(skip("claim_" + std::to_string(k), "univalence claim for Type I", 0.0,
                         Comparison::Greater, "Type I only"));
    }
    return out;
  }
  for (const ClaimResult& c : check_claims(cm)) {
    out.push_back(make("claim_" + std::to_string(c.claim), c.statement, c.margin, 0.0,
                       Comparison::Greater, c.samples, "margin relative to top-curve diameter"));
  }
  return out;
}

// ------------------------------------------------------ grid based checks

Records grid_records(const ConstructedMap& cm, int n) {
  const PeriodCell& cell = cm.cell();
  const double w = cell.width(), h = cell.height;
  std::vector<double> minF(n, kInf), maxF(n, 0.0), maxG(n, 0.0);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t j) {
    const double y = h * (j + 0.5) / n;
    for (int i = 0; i < n; ++i) {
      const Complex z{w * (i + 0.5) / n, y};
      if (cm.singular_distance(z) < 1e-9) continue;
      const double a = std::abs(cm.F(z));
      minF[j] = std::min(minF[j], a);
      maxF[j] = std::max(maxF[j], a);
      maxG[j] = std::max(maxG[j], cm.gradient_modulus(z));
    }
  });
  const double fmin = *std::min_element(minF.begin(), minF.end());
  const double fmax = *std::max_element(maxF.begin(), maxF.end());
  const double gmax = *std::max_element(maxG.begin(), maxG.end());
  const long samples = static_cast<long>(n) * n;

  // Boundary sweep of |grad u| - 1.
  constexpr int kSide = 2000;
  std::vector<double> xs_bottom;
  if (cell.kind == DomainKind::TypeII) {
    for (int k = 0; k < kSide; ++k) xs_bottom.push_back(w * (k + 0.5) / kSide);
  } else {
    for (double x : clustered_samples(1e-4 * cell.omega, 2.0 * cell.omega - 1e-4 * cell.omega,
                                      kSide / 2)) {
      xs_bottom.push_back(x);
      xs_bottom.push_back(x + 2.0 * cell.omega);
    }
  }
  double neumann = 0.0;
  for (double x : xs_bottom) {
    neumann = std::max(neumann, std::abs(cm.gradient_modulus(Complex(x, 0.0)) - 1.0));
  }
  for (int k = 0; k < kSide; ++k) {
    const double x = w * (k + 0.5) / kSide;
    neumann = std::max(neumann, std::abs(cm.gradient_modulus(Complex(x, h)) - 1.0));
  }
  const auto bc = cm.roof().boundary_constants();
  const bool nonneg = bc[0] >= 0.0 && bc[1] >= 0.0;
  return {
      make("local_univalence", "F is zero free on a grid of G: min|F| / max|F|", fmin / fmax,
           0.0, Comparison::Greater, samples),
      make("neumann_boundary", "|grad u| = |2 v_z / F| = 1 on the horizontal sides", neumann,
           1e-8, Comparison::Less, static_cast<long>(xs_bottom.size()) + kSide),
      make("gradient_bound", "sup |grad u| <= 2 in the interior", gmax, 2.0 + 1e-6,
           Comparison::LessEqual, samples),
      make("gradient_bound_unit", "sup |grad u| <= 1 in the interior", gmax, 1.0 + 1e-6,
           Comparison::LessEqual, samples),
      make("boundary_constants_distinct", "the two boundary constants of v differ",
           nonneg ? std::abs(bc[1] - bc[0]) : -1.0, 0.0, Comparison::Greater, 2,
           nonneg ? "" : "a boundary constant is negative"),
  };
}

// ---------------------------------------------------------- null quadrature

Records null_records(const ConstructedMap& cm) {
  const PeriodCell& cell = cm.cell();
  std::vector<double> heights{cell.height};
  if (cell.kind == DomainKind::TypeII) heights.insert(heights.begin(), 0.0);
  constexpr int kPanels = 64;
  using GL = boost::math::quadrature::gauss<double, 16>;
  std::vector<double> nodes, weights;
  for (std::size_t i = 0; i < GL::abscissa().size(); ++i) {
    const double x = GL::abscissa()[i], wt = GL::weights()[i];
    if (x == 0.0) {
      nodes.push_back(0.0);
      weights.push_back(wt);
    } else {
      nodes.push_back(x);
      weights.push_back(wt);
      nodes.push_back(-x);
      weights.push_back(wt);
    }
  }
  const double len = cell.width();
  const double dx = len / kPanels;
  const Complex a = cm.alignment();
  const ComplexFn fn = cm.F_fn();
  std::array<double, 4> worst{0, 0, 0, 0};
  long samples = 0;
  for (double y : heights) {
    std::vector<double> xs(kPanels + 1);
    for (int k = 0; k <= kPanels; ++k) xs[k] = dx * k;
    const std::vector<Complex> starts = side_image(cm, y, xs, kPanels / 4);
    Complex centre = 0.0;
    for (int k = 0; k < kPanels; ++k) centre += starts[k];
    centre /= static_cast<double>(kPanels);
    const std::size_t m = nodes.size();
    std::vector<Complex> wv(kPanels * m), Fv(kPanels * m);
    std::vector<double> wt(kPanels * m);
    parallel_for(kPanels, [&](std::size_t p) {
      const Complex z0{xs[p], y};
      for (std::size_t q = 0; q < m; ++q) {
        const Complex z{xs[p] + 0.5 * dx * (nodes[q] + 1.0), y};
        wv[p * m + q] = starts[p] + a * integrate_segment(fn, z0, z) - centre;
        Fv[p * m + q] = a * cm.F(z);
        wt[p * m + q] = 0.5 * dx * weights[q];
      }
    });
    double maxF = 0.0;
    for (Complex f : Fv) maxF = std::max(maxF, std::abs(f));
    for (int g = 0; g < 4; ++g) {
      Complex total = 0.0;
      double maxg = 0.0;
      for (std::size_t i = 0; i < wv.size(); ++i) {
        const Complex gw = std::pow(wv[i], g);
        maxg = std::max(maxg, std::abs(gw));
        total += wt[i] * gw * Fv[i];
      }
      worst[g] = std::max(worst[g], std::abs(total) / (len * maxg * maxF));
    }
    samples += static_cast<long>(wv.size());
  }
  Records out;
  const char* names[] = {"1", "w", "w^2", "w^3"};
  for (int g = 0; g < 4; ++g) {
    out.push_back(make("null_quadrature_g" + std::to_string(g),
                       std::string("closed-contour integral of g(f) F dz vanishes for g = ") +
                           names[g] + ", relative to length * max|g(f)| * max|F|",
                       worst[g], 1e-7, Comparison::Less, samples));
  }
  return out;
}

// ---------------------------------------------------------------- counting

Records count_records(const ConstructedMap& cm) {
  const PeriodCell& cell = cm.cell();
  const RoofField& roof = cm.roof();
  const Lattice& lat = roof.lattice();
  const double w = cell.omega, h = cell.height;
  const bool type2 = cell.kind == DomainKind::TypeII;
  const auto vz = [&](Complex z) { return roof.vz(z); };
  const auto dvz = [&](Complex z) { return roof.vz_prime(z); };
  const Complex crit = cell.critical_points()[0];
  const Complex wp_crit = lat.wp(crit);

  // Census on the rectangle [w/2, 9w/2] x [y_lo, h]: zeros of v_z and poles
  // of v_z inside, via separate winding numbers of numerator and denominator.
  const double y_lo = type2 ? 0.5 * cell.epsilon : 0.125 * h;
  const auto rect = rectangle(0.5 * w, 4.5 * w, y_lo, h);
  const double Z = winding([&](Complex z) { return lat.wp(z) - wp_crit; },
                           [&](Complex z) { return lat.wp_prime(z); }, rect);
  double P = 0.0;
  if (type2) {
    const double c = roof.c_pole();
    P = winding([&](Complex z) { return 1.0 + c * lat.wp(z); },
                [&](Complex z) { return c * lat.wp_prime(z); }, rect);
  }
  const double total = winding(vz, dvz, rect);
  const double expect_p = type2 ? 2.0 : 0.0;
  double census = std::max({std::abs(Z - 2.0), std::abs(P - expect_p),
                            std::abs(total - (2.0 - expect_p))});
  // n - 2 = N - (poles in the domain) with n = 2 boundary components.
  const long N = std::lround(Z), Pn = std::lround(P);
  std::string note = "zeros " + std::to_string(N) + ", poles " + std::to_string(Pn);
  if (type2) {
    const bool ok = (2 - 2) == N - Pn;
    note += ok ? "; n - 2 = N - P holds with n = 2" : "; census n - 2 = N - P fails";
    if (!ok) census = std::max(census, 1.0);
  } else {
    note += "; double poles of v_z on the bottom side checked locally";
  }

  // Local windings.
  double local = 0.0;
  long nloc = 0;
  const double rho = type2 ? 0.25 * std::min({cell.epsilon, 0.5 * h - cell.epsilon, w})
                           : 0.25 * std::min(w, 0.5 * h);
  for (Complex z : cell.critical_points()) {
    local = std::max(local, std::abs(winding(vz, dvz, circle(z, rho)) - 1.0));
    ++nloc;
  }
  if (type2) {
    for (double x : {2.0 * w, 4.0 * w}) {
      local = std::max(local, std::abs(winding(vz, dvz, circle(Complex(x, cell.epsilon), rho)) + 1.0));
      ++nloc;
    }
  } else {
    for (double x : {0.0, 2.0 * w}) {
      local = std::max(local, std::abs(winding(vz, dvz, circle(Complex(x, 0.0), rho)) + 2.0));
      ++nloc;
    }
  }
  const Complex empty_c{2.0 * w, 0.75 * h};
  const double empty = std::abs(winding(vz, dvz, circle(empty_c, 0.2 * std::min(w, 0.25 * h))));
  return {
      make("pole_zero_count",
           type2 ? "2 zeros and 2 simple poles of v_z per period"
                 : "2 zeros of v_z per period inside G",
           census, 0.01, Comparison::Less, 3, note),
      make("pole_zero_local",
           type2 ? "winding +1 at each critical point, -1 at each pole"
                 : "winding +1 at each critical point, -2 at each double boundary pole",
           local, 0.01, Comparison::Less, nloc),
      make("pole_zero_empty_control", "winding 0 around a disk free of zeros and poles",
           empty, 0.01, Comparison::Less, 1),
  };
}

// --------------------------------------------------------------- flow + v grid

Records grid_flow_records(const ConstructedMap& cm, int n, int levels) {
  Records out;
  const RoofGrid grid = sample_roof_grid(cm, n, n + 2);
  double vmin = kInf;
  for (int j = 1; j + 1 < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) vmin = std::min(vmin, grid.at(i, j));
  }
  out.push_back(make("roof_positivity", "v > 0 at interior grid points (min v)", vmin, 0.0,
                     Comparison::Greater, static_cast<long>(grid.nx) * (grid.ny - 2)));
  if (cm.cell().kind != DomainKind::TypeII) {
    out.push_back(skip("flow_streamlines", "streamlines do not cross", 0.0,
                       Comparison::LessEqual, "Type II only"));
    return out;
  }
  const FlowField ff = extract_streamlines(cm, grid, levels);
  std::vector<Polyline> lines;
  for (const Streamline& s : ff.streamlines) lines.push_back(s.image);
  const auto crossing = find_crossing(lines);
  int saddles = 0;
  for (const Streamline& s : ff.streamlines) saddles += s.saddle ? 1 : 0;
  out.push_back(make("flow_streamlines",
                     "streamlines of distinct levels and components do not cross",
                     crossing ? 1.0 : 0.0, 0.0, Comparison::LessEqual,
                     static_cast<long>(lines.size()),
                     std::to_string(levels) + " levels, " + std::to_string(lines.size()) +
                         " polylines" + (saddles ? ", saddle level split" : "")));
  return out;
}

Records flow_records(const ConstructedMap& cm) {
  const PeriodCell& cell = cm.cell();
  Records out;
  if (cell.kind != DomainKind::TypeII) {
    for (const char* name : {"flow_circulation_sign", "flow_circulation_identity",
                             "flow_pole_flux", "flow_far_field", "flow_bubble_speed",
                             "flow_div_curl"}) {
      out.push_back(skip(name, "hollow-vortex flow", 0.0, Comparison::Less, "Type II only"));
    }
    return out;
  }
  const CirculationReport c = circulation_and_far_field(cm);
  out.push_back(make("flow_circulation_sign", "both bubbles of a period rotate the same way",
                     c.gamma_bottom * c.gamma_top /
                         (std::abs(c.gamma_bottom) * std::abs(c.gamma_top)),
                     0.0, Comparison::Greater, 2));
  const double expect = 2.0 * c.pole_flux;
  out.push_back(make("flow_circulation_identity",
                     "sum of the bubble circulations equals the flux of the two poles",
                     std::abs(c.gamma_bottom + c.gamma_top - expect) / std::abs(expect), 1e-8,
                     Comparison::Less, 2));
  {
    const ComplexFn vz2 = [&](Complex z) { return 2.0 * cm.roof().vz(z); };
    const double rho = 0.25 * std::min(cell.epsilon, 0.5 * cell.height - cell.epsilon);
    const auto loop = circle(Complex(2.0 * cell.omega, cell.epsilon), rho);
    Complex total = 0.0;
    for (std::size_t i = 0; i < loop.size(); ++i) {
      total += integrate_segment(vz2, loop[i], loop[(i + 1) % loop.size()]);
    }
    out.push_back(make("flow_pole_flux",
                       "Im of the integral of 2 v_z around a pole equals 4 pi Res v_z",
                       std::abs(total.imag() - c.pole_flux) / std::abs(c.pole_flux), 1e-8,
                       Comparison::Less, static_cast<long>(loop.size())));
  }
  out.push_back(make("flow_far_field",
                     "far-field velocities above and below the row point in opposite directions",
                     c.far_above.real() * c.far_below.real() /
                         (std::abs(c.far_above) * std::abs(c.far_below)),
                     0.0, Comparison::Less, 2));
  {
    constexpr int kSide = 2000;
    const double unit = std::abs(cm.scale()) / 2.0;
    double worst = 0.0;
    for (double y : {0.0, cell.height}) {
      for (int k = 0; k < kSide; ++k) {
        const Complex z{cell.width() * (k + 0.5) / kSide, y};
        worst = std::max(worst, std::abs(std::abs(velocity(cm, z)) * unit - 1.0));
      }
    }
    out.push_back(make("flow_bubble_speed", "flow speed is 1 on the bubble boundaries", worst,
                       1e-6, Comparison::Less, 2 * kSide));
  }
  {
    constexpr int kGrid = 20;
    const double step = 1e-4;
    double worst = 0.0;
    long n = 0;
    for (int i = 0; i < kGrid; ++i) {
      for (int j = 0; j < kGrid; ++j) {
        const Complex z{cell.width() * (i + 0.5) / kGrid, cell.height * (j + 0.5) / kGrid};
        if (cm.singular_distance(z) < 0.05 * cell.height) continue;
        auto H = [&](Complex p) { return velocity_potential_derivative(cm, p); };
        const Complex dzbar =
            (H(z + step) - H(z - step) + kI * (H(z + kI * step) - H(z - kI * step))) /
            (4.0 * step);
        worst = std::max(worst, std::abs(2.0 * dzbar / std::conj(cm.F(z))));
        ++n;
      }
    }
    out.push_back(make("flow_div_curl",
                       "divergence and curl of the velocity field vanish (finite differences)",
                       worst, 1e-4, Comparison::Less, n));
  }
  return out;
}

}  // namespace

const char* comparison_name(Comparison c) {
  switch (c) {
    case Comparison::Less: return "<";
    case Comparison::LessEqual: return "<=";
    case Comparison::Greater: return ">";
    case Comparison::GreaterEqual: return ">=";
  }
  return "?";
}

const std::vector<std::string>& check_registry() {
  static const std::vector<std::string> names = {
      "elliptic_wp_ode", "elliptic_legendre", "elliptic_sigma_quasi_periodicity",
      "elliptic_wp_periodicity", "elliptic_parity", "elliptic_conjugation",
      "roof_construction", "roof_boundary_constants", "roof_positivity", "roof_harmonicity",
      "roof_period_purity", "roof_log_pole_growth",
      "b_factor_unit_modulus_real", "b_factor_unit_modulus_top", "b_factor_antiperiod",
      "b_factor_conjugation", "b_factor_exterior",
      "cross_form_consistency", "zero_period", "zero_period_negative_control",
      "boundary_closure", "boundary_mirror_symmetry", "boundary_self_intersection",
      "topology", "local_univalence",
      "claim_1", "claim_2", "claim_3", "claim_4", "claim_5", "claim_6",
      "neumann_boundary", "gradient_bound", "gradient_bound_unit",
      "boundary_constants_distinct",
      "null_quadrature_g0", "null_quadrature_g1", "null_quadrature_g2", "null_quadrature_g3",
      "pole_zero_count", "pole_zero_local", "pole_zero_empty_control",
      "flow_circulation_sign", "flow_circulation_identity", "flow_pole_flux",
      "flow_far_field", "flow_bubble_speed", "flow_div_curl", "flow_streamlines",
  };
  return names;
}

std::vector<CheckRecord> kernel_checks(const std::vector<Lattice>& lattices,
                                       std::uint64_t seed, int points) {
  return kernel_records(lattices, seed, points);
}

std::vector<CheckRecord> kernel_selftest(std::uint64_t seed, int points) {
  const std::vector<Lattice> lattices = {
      lattice_build(1.0, 2.0, LatticeKind::Roof),
      lattice_build(1.0, 2.0, LatticeKind::Sigma),
      lattice_build(1.0, 1.5, LatticeKind::Roof),
  };
  return kernel_records(lattices, seed, points);
}

VerificationReport run_verification(const ConstructedMap& cm, const VerifyOptions& opt) {
  VerificationReport rep;
  rep.spec = cm.spec();
  rep.options = opt;
  rep.warnings = cm.warnings();
  rep.c0 = cm.roof().c0();
  rep.c_pole = cm.roof().c_pole();
  rep.boundary_bottom = cm.roof().boundary_constants()[0];
  rep.boundary_top = cm.roof().boundary_constants()[1];
  rep.sigma_ratio = cm.sigma_ratio();
  rep.scale = cm.scale();
  rep.period = cm.period();
  rep.alignment = cm.alignment();

  const auto& reg = check_registry();
  auto names_with = [&](const std::string& prefix) {
    std::vector<std::string> out;
    for (const std::string& n : reg) {
      if (n.rfind(prefix, 0) == 0) out.push_back(n);
    }
    return out;
  };
  const std::uint64_t seed = opt.seed;
  const std::vector<Lattice> lattices = {cm.roof().lattice(), cm.sigma_lattice(),
                                         Lattice::from_half_periods(1.0, 1.0)};
  std::vector<std::function<Records()>> groups = {
      [&] { return guarded(names_with("elliptic_"),
                           [&] { return kernel_records(lattices, seed, opt.kernel_points); }); },
      [&] { return guarded({"roof_construction", "roof_boundary_constants", "roof_harmonicity",
                            "roof_period_purity", "roof_log_pole_growth"},
                           [&] { return roof_records(cm, seed); }); },
      [&] { return guarded(names_with("b_factor_"),
                           [&] { return b_records(cm, seed, opt.b_samples); }); },
      [&] { return guarded({"cross_form_consistency", "zero_period",
                            "zero_period_negative_control"},
                           [&] { return form_records(cm, seed, opt.inject_error); }); },
      [&] { return guarded({"boundary_closure", "boundary_mirror_symmetry",
                            "boundary_self_intersection", "topology"},
                           [&] { return trace_records(cm); }); },
      [&] { return guarded(names_with("claim_"), [&] { return claim_records(cm); }); },
      [&] { return guarded({"local_univalence", "neumann_boundary", "gradient_bound",
                            "gradient_bound_unit", "boundary_constants_distinct"},
                           [&] { return grid_records(cm, opt.grid); }); },
      [&] { return guarded(names_with("null_quadrature_"), [&] { return null_records(cm); }); },
      [&] { return guarded(names_with("pole_zero_"), [&] { return count_records(cm); }); },
      [&] { return guarded({"roof_positivity", "flow_streamlines"},
                           [&] { return grid_flow_records(cm, opt.grid, opt.flow_levels); }); },
      [&] { return guarded({"flow_circulation_sign", "flow_circulation_identity",
                            "flow_pole_flux", "flow_far_field", "flow_bubble_speed",
                            "flow_div_curl"},
                           [&] { return flow_records(cm); }); },
  };
  std::vector<std::future<Records>> futures;
  for (auto& g : groups) futures.push_back(std::async(std::launch::async, g));
  std::map<std::string, CheckRecord> by_name;
  for (auto& f : futures) {
    for (CheckRecord& r : f.get()) by_name[r.name] = std::move(r);
  }
  rep.all_pass = true;
  for (const std::string& n : reg) {
    auto it = by_name.find(n);
    if (it == by_name.end()) {
      throw std::logic_error("verification produced no record for " + n);
    }
    rep.all_pass = rep.all_pass && it->second.pass;
    rep.checks.push_back(std::move(it->second));
  }
  if (by_name.size() != reg.size()) {
    throw std::logic_error("verification produced records outside the registry");
  }
  return rep;
}

namespace {

nlohmann::ordered_json number_json(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
}

nlohmann::ordered_json record_json(const CheckRecord& r) {
  nlohmann::ordered_json j;
  j["name"] = r.name;
  j["anchor"] = r.anchor;
  j["residual"] = number_json(r.residual);
  j["tolerance"] = number_json(r.tolerance);
  j["comparison"] = comparison_name(r.comparison);
  j["pass"] = r.pass;
  j["skipped"] = r.skipped;
  j["samples"] = r.samples;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

}  // namespace

nlohmann::ordered_json complex_json(Complex z) {
  return nlohmann::ordered_json::array({z.real(), z.imag()});
}

nlohmann::ordered_json spec_json(const DomainSpec& s) {
  nlohmann::ordered_json spec;
  spec["type"] = kind_name(s.kind);
  spec["omega"] = s.omega;
  spec["omega_prime_imag"] = s.omega_prime_imag;
  if (s.kind == DomainKind::TypeII && s.epsilon) {
    spec["epsilon"] = *s.epsilon;
  } else {
    spec["epsilon"] = nullptr;
  }
  spec["samples_per_side"] = s.samples_per_side;
  spec["normalization"] = normalization_name(s.normalization);
  return spec;
}

std::string checks_to_json(const std::vector<CheckRecord>& checks, const std::string& kind) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["report"] = kind;
  bool all = true;
  long failed = 0;
  j["checks"] = nlohmann::ordered_json::array();
  for (const CheckRecord& r : checks) {
    j["checks"].push_back(record_json(r));
    all = all && r.pass;
    failed += r.pass ? 0 : 1;
  }
  j["failed"] = failed;
  j["all_pass"] = all;
  return j.dump(2) + "\n";
}

std::string report_to_json(const VerificationReport& rep) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["report"] = "verification";
  j["spec"] = spec_json(rep.spec);
  j["seed"] = rep.options.seed;
  nlohmann::ordered_json res;
  res["samples_per_side"] = rep.spec.samples_per_side;
  res["interior_grid"] = rep.options.grid;
  res["kernel_points_per_lattice"] = rep.options.kernel_points;
  res["b_factor_samples"] = rep.options.b_samples;
  res["zero_period_heights"] = 10;
  res["null_quadrature_panels"] = 64;
  res["null_quadrature_gauss_order"] = 16;
  res["flow_levels"] = rep.options.flow_levels;
  res["segment_tolerance"] = kSegmentTolerance;
  j["resolutions"] = res;
  nlohmann::ordered_json conv;
  conv["base_point"] = complex_json(Complex(rep.spec.omega, 0.0));
  conv["f_at_base_point"] = complex_json(0.0);
  conv["v_minimum_boundary_constant"] = 0.0;
  conv["image_frame"] = rep.spec.kind == DomainKind::TypeII
                            ? "rotated so that the translation period is real and positive"
                            : "rotated to the orientation of the product form v_z B";
  j["conventions"] = conv;
  nlohmann::ordered_json k;
  k["c0"] = rep.c0;
  k["c_pole"] = rep.c_pole;
  k["boundary_constants"] = {rep.boundary_bottom, rep.boundary_top};
  k["sigma_ratio"] = complex_json(rep.sigma_ratio);
  k["scale"] = complex_json(rep.scale);
  k["period"] = complex_json(rep.period);
  k["alignment"] = complex_json(rep.alignment);
  j["constants"] = k;
  j["warnings"] = rep.warnings;
  j["inject_error"] = rep.options.inject_error;
  j["checks"] = nlohmann::ordered_json::array();
  long passed = 0, failed = 0, skipped = 0;
  for (const CheckRecord& r : rep.checks) {
    j["checks"].push_back(record_json(r));
    if (r.skipped) {
      ++skipped;
    } else if (r.pass) {
      ++passed;
    } else {
      ++failed;
    }
  }
  nlohmann::ordered_json sum;
  sum["total"] = static_cast<long>(rep.checks.size());
  sum["passed"] = passed;
  sum["failed"] = failed;
  sum["skipped"] = skipped;
  j["summary"] = sum;
  j["all_pass"] = rep.all_pass;
  return j.dump(2) + "\n";
}

}  // namespace qed
