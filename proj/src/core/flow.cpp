#include "core/flow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <unordered_map>

#include "core/errors.hpp"
#include "core/parallel.hpp"

namespace qed {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

}  // namespace

double RoofGrid::max_value() const {
  return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

RoofGrid sample_roof_grid(const ConstructedMap& cm, int nx, int ny) {
  if (nx < 4 || ny < 3) throw InvalidArgument("roof grid needs nx >= 4 and ny >= 3");
  const PeriodCell& cell = cm.cell();
  const RoofField& roof = cm.roof();
  RoofGrid g;
  g.nx = nx;
  g.ny = ny;
  g.width = cell.width();
  const double dx = g.width / nx;
  const double dy = cell.height / (ny - 1);
  g.xs.resize(nx);
  for (int i = 0; i < nx; ++i) g.xs[i] = (i + 0.5) * dx;
  g.ys.resize(ny);
  for (int j = 0; j < ny; ++j) g.ys[j] = j * dy;
  g.ys.back() = cell.height;
  if (cell.kind == DomainKind::TypeII) {
    // Keep rows off the pole row so that row integrals stay regular.
    for (double& y : g.ys) {
      if (std::abs(y - cell.epsilon) < 0.25 * dy) y = cell.epsilon + 0.25 * dy;
    }
  }
  g.values.assign(static_cast<std::size_t>(nx) * ny, 0.0);
  const auto constants = roof.boundary_constants();
  const ComplexFn vz = roof.vz_fn();
  parallel_for(static_cast<std::size_t>(ny), [&](std::size_t jj) {
    const int j = static_cast<int>(jj);
    double* row = &g.values[jj * nx];
    if (j == 0 || j == ny - 1) {
      std::fill(row, row + nx, constants[j == 0 ? 0 : 1]);
      return;
    }
    const double y = g.ys[j];
    row[0] = roof.value(Complex(g.xs[0], y));
    for (int i = 0; i + 1 < nx; ++i) {
      row[i + 1] = row[i] + 2.0 * integrate_segment(vz, Complex(g.xs[i], y),
                                                    Complex(g.xs[i + 1], y)).real();
    }
  });
  return g;
}

std::vector<LevelCurve> contour_level(const RoofGrid& g, double level) {
  const int nx = g.nx, ny = g.ny;
  // Edge identifiers: horizontal edge (i, j) joins nodes (i, j), (i+1, j);
  // vertical edge (i, j) joins (i, j), (i, j+1).
  auto hid = [nx](int i, int j) { return (static_cast<std::int64_t>(j) * nx + i) * 2; };
  auto vid = [nx](int i, int j) { return (static_cast<std::int64_t>(j) * nx + i) * 2 + 1; };
  auto xnode = [&](int i) { return i < nx ? g.xs[i] : g.xs[0] + g.width; };
  auto lerp = [level](double a, double b) {
    const double d = b - a;
    return d == 0.0 ? 0.5 : std::clamp((level - a) / d, 0.0, 1.0);
  };
  auto edge_point = [&](std::int64_t id) {
    const bool vertical = id % 2 != 0;
    const std::int64_t cellid = id / 2;
    const int i = static_cast<int>(cellid % nx);
    const int j = static_cast<int>(cellid / nx);
    if (vertical) {
      const double t = lerp(g.at(i, j), g.at(i, j + 1));
      return Complex(g.xs[i], g.ys[j] + t * (g.ys[j + 1] - g.ys[j]));
    }
    const int i1 = (i + 1) % nx;
    const double t = lerp(g.at(i, j), g.at(i1, j));
    return Complex(g.xs[i] + t * (xnode(i + 1) - g.xs[i]), g.ys[j]);
  };

  struct Seg {
    std::int64_t a, b;
  };
  std::vector<Seg> segs;
  for (int j = 0; j + 1 < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int i1 = (i + 1) % nx;
      const double va = g.at(i, j), vb = g.at(i1, j), vc = g.at(i1, j + 1),
                   vd = g.at(i, j + 1);
      const int mask = (va > level ? 1 : 0) | (vb > level ? 2 : 0) |
                       (vc > level ? 4 : 0) | (vd > level ? 8 : 0);
      const std::int64_t B = hid(i, j), T = hid(i, j + 1), L = vid(i, j),
                         R = vid(i1, j);
      const bool centre_above = 0.25 * (va + vb + vc + vd) > level;
      switch (mask) {
        case 0: case 15: break;
        case 1: case 14: segs.push_back({L, B}); break;
        case 2: case 13: segs.push_back({B, R}); break;
        case 3: case 12: segs.push_back({L, R}); break;
        case 4: case 11: segs.push_back({R, T}); break;
        case 6: case 9: segs.push_back({B, T}); break;
        case 7: case 8: segs.push_back({L, T}); break;
        case 5:
          if (centre_above) {
            segs.push_back({B, R});
            segs.push_back({L, T});
          } else {
            segs.push_back({L, B});
            segs.push_back({R, T});
          }
          break;
        case 10:
          if (centre_above) {
            segs.push_back({L, B});
            segs.push_back({R, T});
          } else {
            segs.push_back({B, R});
            segs.push_back({L, T});
          }
          break;
        default: break;
      }
    }
  }

  std::unordered_map<std::int64_t, std::vector<std::size_t>> by_edge;
  for (std::size_t s = 0; s < segs.size(); ++s) {
    by_edge[segs[s].a].push_back(s);
    by_edge[segs[s].b].push_back(s);
  }
  std::vector<bool> used(segs.size(), false);
  auto next_seg = [&](std::int64_t edge, std::size_t from) -> std::ptrdiff_t {
    for (std::size_t s : by_edge[edge]) {
      if (s != from && !used[s]) return static_cast<std::ptrdiff_t>(s);
    }
    return -1;
  };
  // Walk from `edge`, leaving segment `from`, collecting edges.
  auto walk = [&](std::int64_t edge, std::size_t from, std::vector<std::int64_t>& out) {
    std::size_t cur = from;
    while (true) {
      const std::ptrdiff_t n = next_seg(edge, cur);
      if (n < 0) return;
      used[n] = true;
      cur = static_cast<std::size_t>(n);
      edge = segs[cur].a == edge ? segs[cur].b : segs[cur].a;
      out.push_back(edge);
    }
  };

  std::vector<LevelCurve> curves;
  for (std::size_t s0 = 0; s0 < segs.size(); ++s0) {
    if (used[s0]) continue;
    used[s0] = true;
    std::vector<std::int64_t> fwd{segs[s0].a, segs[s0].b};
    walk(segs[s0].b, s0, fwd);
    LevelCurve c;
    c.closed = fwd.size() > 2 && fwd.back() == fwd.front();
    std::vector<std::int64_t> edges;
    if (c.closed) {
      fwd.pop_back();
      edges = fwd;
    } else {
      std::vector<std::int64_t> back;
      walk(segs[s0].a, s0, back);
      edges.assign(back.rbegin(), back.rend());
      edges.insert(edges.end(), fwd.begin(), fwd.end());
    }
    c.points.reserve(edges.size());
    for (std::int64_t e : edges) {
      Complex p = edge_point(e);
      if (!c.points.empty()) {
        const double dxp = p.real() - c.points.back().real();
        if (dxp > 0.5 * g.width) p -= g.width;
        if (dxp < -0.5 * g.width) p += g.width;
      }
      c.points.push_back(p);
    }
    curves.push_back(std::move(c));
  }
  return curves;
}

std::vector<Streamline> streamlines_at(const ConstructedMap& cm,
                                       const RoofGrid& grid, double level) {
  const auto constants = cm.roof().boundary_constants();
  const double range = std::max(grid.max_value() - std::min(constants[0], constants[1]), 1e-300);
  std::vector<Streamline> out;
  for (int side = 0; side < 2; ++side) {
    if (std::abs(level - constants[side]) <= 1e-12 * range) {
      // The level set is a horizontal side of G (for Type I the bottom side
      // is split at the double poles; the top side is the closed curve).
      const BoundaryTrace tr = trace_boundary(cm, 4 * grid.nx);
      const double y = side == 0 ? 0.0 : cm.cell().height;
      for (const TraceCurve& tc : tr.curves) {
        const bool is_top = tc.label == "bubble_1" || tc.label == "top_closed";
        if (is_top != (side == 1)) continue;
        Streamline s;
        s.level = level;
        s.boundary = true;
        s.image = tc.points;
        s.pullback = {Complex(0.0, y), Complex(cm.cell().width(), y)};
        out.push_back(std::move(s));
      }
      return out;
    }
  }
  const std::vector<LevelCurve> curves = contour_level(grid, level);
  out.resize(curves.size());
  const ComplexFn fn = cm.F_fn();
  const Complex a = cm.alignment();
  parallel_for(curves.size(), [&](std::size_t k) {
    Streamline& s = out[k];
    s.level = level;
    s.pullback = curves[k].points;
    if (curves[k].closed && !s.pullback.empty()) {
      // Close the loop, keeping the seam unwrapped.
      Complex first = s.pullback.front();
      const double dxp = first.real() - s.pullback.back().real();
      if (dxp > 0.5 * grid.width) first -= grid.width;
      if (dxp < -0.5 * grid.width) first += grid.width;
      s.pullback.push_back(first);
    }
    s.image.resize(s.pullback.size());
    if (s.pullback.empty()) return;
    s.image[0] = cm.image(s.pullback[0]);
    for (std::size_t i = 0; i + 1 < s.pullback.size(); ++i) {
      s.image[i + 1] = s.image[i] + a * integrate_segment(fn, s.pullback[i], s.pullback[i + 1]);
    }
    // Loops that do not cross the cut close in the image up to roundoff;
    // those that do end one period away and stay open.
    if (curves[k].closed && s.image.size() > 2 &&
        std::abs(s.image.back() - s.image.front()) <= 1e-9 * diameter(s.image)) {
      s.image.back() = s.image.front();
    }
  });
  return out;
}

FlowField extract_streamlines(const ConstructedMap& cm, const RoofGrid& grid,
                              int n_levels) {
  if (n_levels < 1) throw InvalidArgument("at least one streamline level is required");
  FlowField ff;
  ff.grid_nx = grid.nx;
  ff.grid_ny = grid.ny;
  ff.grid_max = grid.max_value();
  const auto constants = cm.roof().boundary_constants();
  const double cmin = std::min(constants[0], constants[1]);
  const double range = ff.grid_max - cmin;
  ff.saddle_value = cm.roof().value(cm.cell().critical_points()[0]);
  for (int k = 1; k <= n_levels; ++k) {
    const double level = cmin + k * range / (n_levels + 1);
    ff.level_values.push_back(level);
    const bool saddle = std::abs(level - ff.saddle_value) < 1e-9 * range;
    // A level through the saddle is taken just above it, which splits the
    // figure eight into its two branches.
    const double used = saddle ? level + 1e-6 * range : level;
    for (Streamline& s : streamlines_at(cm, grid, used)) {
      s.family = k - 1;
      s.saddle = saddle;
      s.level = level;
      ff.streamlines.push_back(std::move(s));
    }
  }
  return ff;
}

FlowField extract_streamlines(const ConstructedMap& cm, int n_levels, int nx, int ny) {
  return extract_streamlines(cm, sample_roof_grid(cm, nx, ny), n_levels);
}

Complex velocity_potential_derivative(const ConstructedMap& cm, Complex z) {
  return kI * 2.0 * cm.roof().vz(z) / cm.F(z);
}

Complex velocity(const ConstructedMap& cm, Complex z) {
  return cm.alignment() * std::conj(velocity_potential_derivative(cm, z));
}

CirculationReport circulation_and_far_field(const ConstructedMap& cm) {
  const PeriodCell& cell = cm.cell();
  if (cell.kind != DomainKind::TypeII) {
    throw InvalidArgument("circulation and far field are defined for Type II");
  }
  const ComplexFn vz = cm.roof().vz_fn();
  auto line = [&](double y) {
    Complex total = 0.0;
    constexpr int kPieces = 16;
    for (int k = 0; k < kPieces; ++k) {
      total += integrate_segment(vz, Complex(cell.width() * k / kPieces, y),
                                 Complex(cell.width() * (k + 1) / kPieces, y));
    }
    return 2.0 * total;
  };
  CirculationReport r;
  r.gamma_bottom = line(0.0).imag();
  r.gamma_top = -line(cell.height).imag();
  r.residue = cm.roof().pole_residue();
  r.pole_flux = 4.0 * kPi * r.residue;
  // Near a pole v_z ~ r/(z - p) and F ~ Res F/(z - p), so the velocity tends
  // to the ratio of residues.
  const Complex ie{0.0, cell.epsilon};
  for (int k = 0; k < 2; ++k) {
    const Complex p = ie + 2.0 * cell.omega * k;
    const Complex H = kI * 2.0 / (cm.scale() * cm.bfac().eval(p));
    (k == 0 ? r.far_above : r.far_below) = cm.alignment() * std::conj(H);
  }
  return r;
}

}  // namespace qed
