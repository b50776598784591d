#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core/blaschke.hpp"
#include "core/geometry.hpp"
#include "core/roof.hpp"

namespace qed {

enum class Normalization { RawSigmaRatio, NeumannUnit };

struct DomainSpec {
  DomainKind kind = DomainKind::TypeII;
  double omega = 1.0;             // omega_1 = 2*omega
  double omega_prime_imag = 2.0;  // Im omega'
  std::optional<double> epsilon = 0.5;
  int samples_per_side = 1024;
  Normalization normalization = Normalization::NeumannUnit;
};

// Throws InvalidArgument for unusable specs; returns warnings otherwise.
std::vector<std::string> validate_spec(const DomainSpec& spec);

const char* kind_name(DomainKind kind);
const char* normalization_name(Normalization n);

// The conformal map f = int F from the pullback rectangle G onto one period
// of the quasi-exceptional domain, with
//   F = scale * v_z * B
// scale = 2 for NeumannUnit (|grad u| = 1/|B|), and for RawSigmaRatio the
// constant that turns F into the bare sigma quotient. F is evaluated through
// the sigma quotient, which has no removable singularities at the zeros of
// v_z; the product form is kept as an independent cross-check.
class ConstructedMap {
 public:
  const DomainSpec& spec() const { return spec_; }
  const PeriodCell& cell() const { return roof_.cell(); }
  const RoofField& roof() const { return roof_; }
  const BFactor& bfac() const { return bfac_; }
  const Lattice& sigma_lattice() const { return bfac_.lattice(); }
  const std::vector<std::string>& warnings() const { return warnings_; }

  Complex scale() const { return scale_; }
  // sigma quotient / (v_z * B), a constant.
  Complex sigma_ratio() const { return lambda_; }
  // std / |mean| of the sampled quotient.
  double cross_form_spread() const { return spread_; }
  int cross_form_samples() const { return spread_samples_; }

  Complex F(Complex z) const;
  Complex F_product(Complex z) const;
  Complex F_sigma_raw(Complex z) const;
  // F rescaled to the NeumannUnit normalization.
  Complex F_unit(Complex z) const { return F(z) * (2.0 / scale_); }
  // |grad u| at f(z) under the NeumannUnit normalization, i.e. |2 v_z / F_unit|.
  double gradient_modulus(Complex z) const;

  Complex f(Complex z) const;
  Complex f_along(std::span<const Complex> path_from_base) const;
  Complex base_point() const { return roof_.base_point(); }
  // Translation period of the image (Type II), 2*pi*i times the residue of F
  // at i*eps; zero for Type I.
  Complex period() const { return period_; }
  // Unit factor rotating the period onto the positive real axis (1 for
  // Type I). Image coordinates are alignment() * f.
  Complex alignment() const { return alignment_; }
  Complex image(Complex z) const { return alignment_ * f(z); }
  // Distance from z to the nearest singularity of F (poles of v_z).
  double singular_distance(Complex z) const;

  ComplexFn F_fn() const {
    return [this](Complex z) { return F(z); };
  }

 private:
  friend ConstructedMap build_map(const DomainSpec& spec);

  DomainSpec spec_;
  RoofField roof_;
  BFactor bfac_;
  std::vector<std::string> warnings_;
  Complex lambda_{1.0, 0.0};
  Complex scale_{2.0, 0.0};
  Complex factor_{1.0, 0.0};  // scale / lambda
  double spread_ = 0.0;
  int spread_samples_ = 0;
  Complex period_{0.0, 0.0};
  Complex alignment_{1.0, 0.0};
  AnchoredIntegral f_anchor_;
};

ConstructedMap build_map(const DomainSpec& spec);

// |int over one horizontal period of F(x + iy) dx| along Im z = y.
struct ZeroPeriodResult {
  double y;
  double residual;
  double max_abs_F;  // sampled on the line
  double tolerance;  // 1e-8 * line length * max|F|
  bool pass;
};
// `perturb` multiplies F by (1 + 0.01 sin(pi x / omega_1)), the broken
// symmetry used as a negative control.
ZeroPeriodResult zero_period_check(const ConstructedMap& cm, double y,
                                   bool perturb = false);

struct TraceCurve {
  std::string label;
  std::vector<Complex> points;  // image coordinates
  bool closed = false;
  double closure_gap = 0.0;  // |end - start| / diameter before closing
  bool unbounded = false;    // open arc ending at a boundary singularity
};

struct BoundaryTrace {
  DomainKind kind = DomainKind::TypeII;
  std::vector<TraceCurve> curves;
  Complex period{0.0, 0.0};  // image-plane translation period (Type II)
  int samples_per_side = 0;
  double cutoff = 0.0;  // Type I: excluded parameter length at each pole
};

// Images of the horizontal sides of G. Type II: two closed bubbles. Type I:
// the closed top curve and two open arcs from the bottom side split at the
// double poles 0 and 2*omega.
BoundaryTrace trace_boundary(const ConstructedMap& cm, int samples_per_side = 0);

// Image points of the segment y = const, x in [x0, x1], sampled at `xs`,
// by cumulative quadrature from the sample with index `anchor`.
std::vector<Complex> side_image(const ConstructedMap& cm, double y,
                                const std::vector<double>& xs,
                                std::size_t anchor);

// Parameter samples on [a, b] clustered toward both ends by a cosine rule.
std::vector<double> clustered_samples(double a, double b, std::size_t n);

struct MirrorResult {
  double residual;  // relative to curve diameter
  double axis;      // position of the mirror axis
};
// Mirror symmetry of a closed side image about a vertical (or horizontal)
// axis; the samples must be uniform in x over one period including both ends.
MirrorResult mirror_residual(const std::vector<Complex>& closed_side,
                             bool vertical_axis = true);

struct ClaimResult {
  int claim;
  std::string statement;
  double margin;  // > 0 when the statement holds
  bool pass;
  int samples;
};
// Numeric translation of the six univalence claims for a Type I map.
std::vector<ClaimResult> check_claims(const ConstructedMap& cm, int samples_per_side = 0);

struct TopologyResult {
  int closed_curves = 0;
  int open_arcs = 0;
  bool expected = false;
  std::string description;
};
TopologyResult classify_topology(const BoundaryTrace& trace);

// Curves of the trace (Type II: with one translate on each side) fed to the
// crossing sweep.
std::optional<Crossing> trace_crossing(const BoundaryTrace& trace);

}  // namespace qed
