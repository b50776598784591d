#include "core/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <istream>
#include <ostream>
#include <sstream>

#include "core/errors.hpp"

namespace qed {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_curves_csv(std::ostream& os, const std::vector<LabeledCurve>& curves) {
  os << "curve_id,x,y\n";
  for (const LabeledCurve& c : curves) {
    for (Complex p : c.points) {
      os << c.id << ',' << format_double(p.real()) << ',' << format_double(p.imag())
         << '\n';
    }
  }
}

namespace {

double parse_number(const std::string& s, std::size_t line) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) {
    throw IoError("CSV line " + std::to_string(line) + ": bad number '" + s + "'");
  }
  return v;
}

}  // namespace

std::vector<LabeledCurve> parse_curves_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw IoError("CSV input is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "curve_id,x,y") throw IoError("CSV header must be 'curve_id,x,y'");
  std::vector<LabeledCurve> out;
  std::size_t n = 1;
  while (std::getline(is, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos || line.find(',', c2 + 1) != std::string::npos) {
      throw IoError("CSV line " + std::to_string(n) + ": expected 3 fields");
    }
    const std::string id = line.substr(0, c1);
    const double x = parse_number(line.substr(c1 + 1, c2 - c1 - 1), n);
    const double y = parse_number(line.substr(c2 + 1), n);
    if (out.empty() || out.back().id != id) out.push_back({id, {}});
    out.back().points.emplace_back(x, y);
  }
  return out;
}

void write_svg(std::ostream& os, const std::vector<SvgLayer>& layers) {
  std::vector<Polyline> all;
  for (const SvgLayer& l : layers) {
    for (const LabeledCurve& c : l.curves) {
      if (!c.points.empty()) all.push_back(c.points);
    }
  }
  BBox box = all.empty() ? BBox{0, 0, 1, 1} : bounding_box(all);
  const double w0 = std::max(box.xmax - box.xmin, 1e-12);
  const double h0 = std::max(box.ymax - box.ymin, 1e-12);
  const double mx = 0.05 * w0, my = 0.05 * h0;
  const double vx = box.xmin - mx, vy = -(box.ymax + my);
  const double vw = w0 + 2 * mx, vh = h0 + 2 * my;
  const double diag = std::hypot(vw, vh);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << format_double(vx)
     << ' ' << format_double(vy) << ' ' << format_double(vw) << ' '
     << format_double(vh) << "\">\n";
  for (const SvgLayer& l : layers) {
    for (const LabeledCurve& c : l.curves) {
      if (c.points.size() < 2) continue;
      os << "<path id=\"" << c.id << "\" fill=\"none\" stroke=\"" << l.style.stroke
         << "\" stroke-width=\"" << format_double(l.style.relative_width * diag)
         << "\" d=\"";
      for (std::size_t i = 0; i < c.points.size(); ++i) {
        os << (i == 0 ? 'M' : 'L') << format_double(c.points[i].real()) << ','
           << format_double(-c.points[i].imag());
        if (i + 1 < c.points.size()) os << ' ';
      }
      os << "\"/>\n";
    }
  }
  os << "</svg>\n";
}

std::vector<LabeledCurve> trace_curves(const BoundaryTrace& trace) {
  std::vector<LabeledCurve> out;
  for (const TraceCurve& c : trace.curves) out.push_back({c.label, c.points});
  return out;
}

std::vector<LabeledCurve> plot_curves(const BoundaryTrace& trace, int periods,
                                      double clip_factor) {
  std::vector<LabeledCurve> out;
  if (trace.kind == DomainKind::TypeII) {
    for (int p = 0; p < std::max(periods, 1); ++p) {
      for (const TraceCurve& c : trace.curves) {
        LabeledCurve lc{c.label + "_p" + std::to_string(p), c.points};
        for (Complex& z : lc.points) z += static_cast<double>(p) * trace.period;
        out.push_back(std::move(lc));
      }
    }
    return out;
  }
  const TraceCurve* closed = nullptr;
  for (const TraceCurve& c : trace.curves) {
    if (c.closed) closed = &c;
  }
  if (closed == nullptr) return trace_curves(trace);
  const BBox b = bounding_box(closed->points);
  const Complex centre{0.5 * (b.xmin + b.xmax), 0.5 * (b.ymin + b.ymax)};
  // Scale: the closed curve or the gap to the nearer arcs, whichever is larger.
  double reach = b.diagonal();
  for (const TraceCurve& c : trace.curves) {
    if (c.closed || c.points.empty()) continue;
    double nearest = std::abs(c.points.front() - centre);
    for (Complex z : c.points) nearest = std::min(nearest, std::abs(z - centre));
    reach = std::max(reach, nearest);
  }
  const double radius = clip_factor * reach;
  for (const TraceCurve& c : trace.curves) {
    if (c.closed) {
      out.push_back({c.label, c.points});
      continue;
    }
    // Keep the runs of points inside the clip disk.
    int piece = 0;
    LabeledCurve cur;
    for (Complex z : c.points) {
      if (std::abs(z - centre) <= radius) {
        if (cur.points.empty()) cur.id = c.label + "_" + std::to_string(piece++);
        cur.points.push_back(z);
      } else if (!cur.points.empty()) {
        out.push_back(std::move(cur));
        cur = {};
      }
    }
    if (!cur.points.empty()) out.push_back(std::move(cur));
  }
  return out;
}

std::vector<LabeledCurve> streamline_curves(const FlowField& flow) {
  std::vector<LabeledCurve> out;
  std::vector<int> count(flow.level_values.size() + 1, 0);
  for (const Streamline& s : flow.streamlines) {
    const int k = s.family;
    out.push_back({"level_" + std::to_string(k) + "_" + std::to_string(count[k]++),
                   s.image});
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content << std::flush;
    if (!std::cout) throw IoError("failed writing to standard output");
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << content;
  f.flush();
  if (!f) throw IoError("failed writing '" + path + "'");
}

}  // namespace qed
