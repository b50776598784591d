#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "core/flow.hpp"
#include "core/mapping.hpp"

namespace qed {

// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

struct LabeledCurve {
  std::string id;
  std::vector<Complex> points;
};

// CSV with header `curve_id,x,y`, one row per point.
void write_curves_csv(std::ostream& os, const std::vector<LabeledCurve>& curves);
// Inverse of write_curves_csv; throws IoError on malformed input.
std::vector<LabeledCurve> parse_curves_csv(std::istream& is);

struct SvgStyle {
  std::string stroke = "#1f3b73";
  double relative_width = 0.002;  // stroke width / viewBox diagonal
};
struct SvgLayer {
  std::vector<LabeledCurve> curves;
  SvgStyle style;
};
// Stroke-only paths; viewBox is the bounding box of all layers plus a 5%
// margin, with the y axis pointing up.
void write_svg(std::ostream& os, const std::vector<SvgLayer>& layers);

// Curves of a boundary trace as plotted: Type II repeats the bubbles over
// `periods` consecutive periods along the aligned row; Type I arcs are cut
// to a disk around the closed curve whose radius is clip_factor times the
// larger of its diameter and its distance to either arc.
std::vector<LabeledCurve> plot_curves(const BoundaryTrace& trace, int periods = 2,
                                      double clip_factor = 3.0);
std::vector<LabeledCurve> trace_curves(const BoundaryTrace& trace);
std::vector<LabeledCurve> streamline_curves(const FlowField& flow);

// Writes a file ("-" is standard output); throws IoError.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace qed
