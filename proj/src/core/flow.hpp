#pragma once

#include <vector>

#include "core/mapping.hpp"

namespace qed {

// Samples of v on a grid over G that is periodic in x: nodes at
// x_i = (i + 1/2) * width / nx and at ny heights from the bottom side to the
// top side. Rows are filled by cumulative quadrature along the row.
struct RoofGrid {
  int nx = 0, ny = 0;
  double width = 0.0;
  std::vector<double> xs, ys;
  std::vector<double> values;  // row-major, values[j * nx + i]
  double at(int i, int j) const { return values[static_cast<std::size_t>(j) * nx + i]; }
  double max_value() const;
};

RoofGrid sample_roof_grid(const ConstructedMap& cm, int nx, int ny);

// Level set {v = level} on the grid by marching squares, with saddle cells
// decided by the cell-centre average. Polylines are in the pullback plane,
// unwrapped across the periodic seam.
struct LevelCurve {
  std::vector<Complex> points;
  bool closed = false;
};
std::vector<LevelCurve> contour_level(const RoofGrid& grid, double level);

struct Streamline {
  double level = 0.0;
  int family = 0;          // index of the requested level
  bool saddle = false;     // requested level sat on a critical value
  bool boundary = false;   // level equals a boundary constant
  std::vector<Complex> pullback;
  std::vector<Complex> image;  // image coordinates
};

struct FlowField {
  std::vector<double> level_values;
  std::vector<Streamline> streamlines;
  double saddle_value = 0.0;
  double grid_max = 0.0;
  int grid_nx = 0, grid_ny = 0;
};

// Levels L_k = c_min + k (v_max - c_min) / (n + 1), k = 1..n, where c_min is
// the smaller boundary constant and v_max the largest sampled v.
FlowField extract_streamlines(const ConstructedMap& cm, int n_levels,
                              int nx = 128, int ny = 65);
FlowField extract_streamlines(const ConstructedMap& cm, const RoofGrid& grid,
                              int n_levels);
// Streamlines of one level, mapped through f.
std::vector<Streamline> streamlines_at(const ConstructedMap& cm,
                                       const RoofGrid& grid, double level);

// Flow velocity (as a complex number, image coordinates) at f(z):
// conj of i * 2 u_w, with u the stream function. Its modulus is |grad u|,
// which is 1 on the bubbles under NeumannUnit.
Complex velocity(const ConstructedMap& cm, Complex z);
// The holomorphic function H = i * 2 v_z / F whose conjugate is the velocity
// before alignment.
Complex velocity_potential_derivative(const ConstructedMap& cm, Complex z);

struct CirculationReport {
  double gamma_bottom = 0.0;  // circulation around the bottom-side bubble
  double gamma_top = 0.0;     // circulation around the top-side bubble
  double residue = 0.0;       // residue of v_z at i*eps
  double pole_flux = 0.0;     // 4*pi*residue, Im of the integral of 2 v_z around one pole
  Complex far_above{0.0, 0.0};  // velocity as Im f -> +infinity
  Complex far_below{0.0, 0.0};  // velocity as Im f -> -infinity
};
// Type II only.
CirculationReport circulation_and_far_field(const ConstructedMap& cm);

}  // namespace qed
