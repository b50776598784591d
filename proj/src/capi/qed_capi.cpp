#include "qed/qed.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <sstream>
#include <string>

#include "core/errors.hpp"
#include "core/flow.hpp"
#include "core/io.hpp"
#include "core/mapping.hpp"
#include "core/verify.hpp"
#include "json.hpp"

struct qed_map {
  qed::ConstructedMap cm;
};

struct qed_trace {
  qed::BoundaryTrace trace;
  std::vector<std::vector<qed_complex>> points;
};

namespace {

using qed::Complex;
using json = nlohmann::ordered_json;

thread_local std::string g_last_error;

qed_status fail(qed_status s, const std::string& message) {
  g_last_error = message;
  return s;
}

qed_status status_of(qed::ErrorCode c) {
  switch (c) {
    case qed::ErrorCode::InvalidArgument: return QED_INVALID_ARGUMENT;
    case qed::ErrorCode::PoleProximity: return QED_POLE;
    case qed::ErrorCode::QuadratureFailure: return QED_QUADRATURE;
    case qed::ErrorCode::ConstructionFailure: return QED_CONSTRUCTION;
    case qed::ErrorCode::Io: return QED_IO;
  }
  return QED_INTERNAL;
}

// Runs body, translating exceptions into status codes.
template <class Body>
qed_status guard(Body&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const qed::Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(QED_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(QED_INTERNAL, e.what());
  } catch (...) {
    return fail(QED_INTERNAL, "unknown error");
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

qed::DomainSpec to_spec(const qed_spec& s) {
  qed::DomainSpec d;
  if (s.kind == QED_TYPE_I) {
    d.kind = qed::DomainKind::TypeI;
    d.epsilon.reset();
  } else if (s.kind == QED_TYPE_II) {
    d.kind = qed::DomainKind::TypeII;
    if (std::isnan(s.epsilon)) {
      d.epsilon.reset();
    } else {
      d.epsilon = s.epsilon;
    }
  } else {
    throw qed::InvalidArgument("unknown domain kind");
  }
  d.omega = s.omega;
  d.omega_prime_imag = s.omega_prime_imag;
  d.samples_per_side = s.samples_per_side;
  switch (s.normalization) {
    case QED_NORMALIZATION_NEUMANN_UNIT: d.normalization = qed::Normalization::NeumannUnit; break;
    case QED_NORMALIZATION_RAW_SIGMA_RATIO:
      d.normalization = qed::Normalization::RawSigmaRatio;
      break;
    default: throw qed::InvalidArgument("unknown normalization");
  }
  return d;
}

json points_json(const std::vector<Complex>& pts) {
  json a = json::array();
  for (Complex p : pts) a.push_back(json::array({p.real(), p.imag()}));
  return a;
}

json curves_json(const std::vector<qed::LabeledCurve>& curves) {
  json a = json::array();
  for (const qed::LabeledCurve& c : curves) {
    json j;
    j["id"] = c.id;
    j["points"] = points_json(c.points);
    a.push_back(std::move(j));
  }
  return a;
}

std::string emit(qed_format format, const std::vector<qed::SvgLayer>& layers,
                 const json& extra) {
  std::ostringstream os;
  switch (format) {
    case QED_FORMAT_CSV: {
      std::vector<qed::LabeledCurve> all;
      for (const auto& l : layers) all.insert(all.end(), l.curves.begin(), l.curves.end());
      qed::write_curves_csv(os, all);
      break;
    }
    case QED_FORMAT_SVG: qed::write_svg(os, layers); break;
    case QED_FORMAT_JSON: {
      json j = extra;
      json curves = json::array();
      for (const auto& l : layers) {
        for (json& c : curves_json(l.curves)) curves.push_back(std::move(c));
      }
      j["curves"] = std::move(curves);
      os << j.dump(2) << '\n';
      break;
    }
    default: throw qed::InvalidArgument("unknown output format");
  }
  return os.str();
}

}  // namespace

extern "C" {

void qed_spec_default(qed_spec* spec) {
  if (spec == nullptr) return;
  spec->kind = QED_TYPE_II;
  spec->omega = 1.0;
  spec->omega_prime_imag = 2.0;
  spec->epsilon = 0.5;
  spec->samples_per_side = 1024;
  spec->normalization = QED_NORMALIZATION_NEUMANN_UNIT;
}

qed_status qed_map_create(const qed_spec* spec, qed_map** out) {
  if (spec == nullptr || out == nullptr) return fail(QED_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guard([&] {
    auto* m = new qed_map{qed::build_map(to_spec(*spec))};
    *out = m;
    return QED_OK;
  });
}

void qed_map_destroy(qed_map* map) { delete map; }

qed_status qed_map_eval(const qed_map* map, qed_quantity what, qed_complex z, qed_complex* out) {
  if (map == nullptr || out == nullptr) return fail(QED_INVALID_ARGUMENT, "null argument");
  return guard([&] {
    const Complex p{z.re, z.im};
    Complex r;
    switch (what) {
      case QED_EVAL_F: r = map->cm.F(p); break;
      case QED_EVAL_MAP: r = map->cm.f(p); break;
      case QED_EVAL_IMAGE: r = map->cm.image(p); break;
      case QED_EVAL_VZ: r = map->cm.roof().vz(p); break;
      case QED_EVAL_B: r = map->cm.bfac().eval(p); break;
      case QED_EVAL_V: r = map->cm.roof().value(p); break;
      default: throw qed::InvalidArgument("unknown quantity");
    }
    *out = {r.real(), r.imag()};
    return QED_OK;
  });
}

size_t qed_map_warning_count(const qed_map* map) {
  return map == nullptr ? 0 : map->cm.warnings().size();
}

const char* qed_map_warning(const qed_map* map, size_t index) {
  if (map == nullptr || index >= map->cm.warnings().size()) return nullptr;
  return map->cm.warnings()[index].c_str();
}

qed_status qed_map_summary_json(const qed_map* map, char** json_out) {
  if (map == nullptr || json_out == nullptr) return fail(QED_INVALID_ARGUMENT, "null argument");
  *json_out = nullptr;
  return guard([&] {
    const qed::ConstructedMap& cm = map->cm;
    json j;
    j["schema"] = 1;
    j["report"] = "build";
    j["spec"] = qed::spec_json(cm.spec());
    json k;
    k["c0"] = cm.roof().c0();
    k["c_pole"] = cm.roof().c_pole();
    const auto bc = cm.roof().boundary_constants();
    k["boundary_constants"] = {bc[0], bc[1]};
    if (cm.cell().kind == qed::DomainKind::TypeII) {
      k["pole_residue"] = cm.roof().pole_residue();
    }
    k["b_kappa"] = qed::complex_json(cm.bfac().kappa());
    k["sigma_ratio"] = qed::complex_json(cm.sigma_ratio());
    k["cross_form_spread"] = cm.cross_form_spread();
    k["scale"] = qed::complex_json(cm.scale());
    k["period"] = qed::complex_json(cm.period());
    k["alignment"] = qed::complex_json(cm.alignment());
    j["constants"] = k;
    j["warnings"] = cm.warnings();
    const qed::BoundaryTrace tr = qed::trace_boundary(cm);
    json curves = json::array();
    for (const qed::TraceCurve& c : tr.curves) {
      json cj;
      cj["label"] = c.label;
      cj["points"] = c.points.size();
      cj["closed"] = c.closed;
      cj["unbounded"] = c.unbounded;
      if (!c.unbounded) cj["diameter"] = qed::diameter(c.points);
      curves.push_back(std::move(cj));
    }
    j["trace"]["curves"] = std::move(curves);
    j["trace"]["topology"] = qed::classify_topology(tr).description;
    *json_out = copy_string(j.dump(2) + "\n");
    return QED_OK;
  });
}

qed_status qed_trace_create(const qed_map* map, int samples_per_side, qed_trace** out) {
  if (map == nullptr || out == nullptr) return fail(QED_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guard([&] {
    if (samples_per_side > 0 && samples_per_side < 64) {
      throw qed::InvalidArgument("samples per side must be at least 64");
    }
    auto t = std::make_unique<qed_trace>();
    t->trace = qed::trace_boundary(map->cm, std::max(samples_per_side, 0));
    for (const qed::TraceCurve& c : t->trace.curves) {
      std::vector<qed_complex> pts;
      pts.reserve(c.points.size());
      for (Complex p : c.points) pts.push_back({p.real(), p.imag()});
      t->points.push_back(std::move(pts));
    }
    *out = t.release();
    return QED_OK;
  });
}

void qed_trace_destroy(qed_trace* trace) { delete trace; }

size_t qed_trace_curve_count(const qed_trace* trace) {
  return trace == nullptr ? 0 : trace->trace.curves.size();
}

qed_status qed_trace_curve(const qed_trace* trace, size_t index, const char** label,
                           const qed_complex** points, size_t* count, int* closed) {
  if (trace == nullptr) return fail(QED_INVALID_ARGUMENT, "null trace");
  if (index >= trace->trace.curves.size()) {
    return fail(QED_INVALID_ARGUMENT, "curve index out of range");
  }
  const qed::TraceCurve& c = trace->trace.curves[index];
  if (label) *label = c.label.c_str();
  if (points) *points = trace->points[index].data();
  if (count) *count = trace->points[index].size();
  if (closed) *closed = c.closed ? 1 : 0;
  g_last_error.clear();
  return QED_OK;
}

qed_status qed_plot_write(const qed_map* map, qed_format format, const char* path) {
  if (map == nullptr || path == nullptr) return fail(QED_INVALID_ARGUMENT, "null argument");
  return guard([&] {
    const qed::BoundaryTrace tr = qed::trace_boundary(map->cm);
    json extra;
    extra["schema"] = 1;
    extra["report"] = "plot";
    extra["spec"] = qed::spec_json(map->cm.spec());
    extra["period"] = qed::complex_json(tr.period);
    const std::vector<qed::SvgLayer> layers = {{qed::plot_curves(tr), {}}};
    qed::write_text_file(path, emit(format, layers, extra));
    return QED_OK;
  });
}

qed_status qed_flow_write(const qed_map* map, int n_levels, qed_format format,
                          const char* path) {
  if (map == nullptr || path == nullptr) return fail(QED_INVALID_ARGUMENT, "null argument");
  return guard([&] {
    const qed::ConstructedMap& cm = map->cm;
    if (cm.cell().kind != qed::DomainKind::TypeII) {
      throw qed::InvalidArgument("the flow interpretation needs a Type II domain");
    }
    if (n_levels < 1 || n_levels > 1000) {
      throw qed::InvalidArgument("number of levels must lie in [1, 1000]");
    }
    const qed::FlowField ff = qed::extract_streamlines(cm, n_levels);
    const qed::CirculationReport circ = qed::circulation_and_far_field(cm);
    json extra;
    extra["schema"] = 1;
    extra["report"] = "flow";
    extra["spec"] = qed::spec_json(cm.spec());
    extra["levels"] = ff.level_values;
    extra["saddle_value"] = ff.saddle_value;
    extra["circulation"] = {{"bottom_bubble", circ.gamma_bottom},
                            {"top_bubble", circ.gamma_top},
                            {"pole_flux", circ.pole_flux}};
    extra["far_field"] = {{"above", qed::complex_json(circ.far_above)},
                          {"below", qed::complex_json(circ.far_below)}};
    qed::SvgStyle stream_style;
    stream_style.stroke = "#7a8fb0";
    stream_style.relative_width = 0.001;
    const std::vector<qed::SvgLayer> layers = {
        {qed::streamline_curves(ff), stream_style},
        {qed::trace_curves(qed::trace_boundary(cm)), {}},
    };
    qed::write_text_file(path, emit(format, layers, extra));
    return QED_OK;
  });
}

qed_status qed_verify_json(const qed_map* map, uint64_t seed, int inject_error, char** json_out,
                           int* all_pass) {
  if (map == nullptr || json_out == nullptr) return fail(QED_INVALID_ARGUMENT, "null argument");
  *json_out = nullptr;
  return guard([&] {
    qed::VerifyOptions opt;
    opt.seed = seed;
    opt.inject_error = inject_error != 0;
    const qed::VerificationReport rep = qed::run_verification(map->cm, opt);
    *json_out = copy_string(qed::report_to_json(rep));
    if (all_pass) *all_pass = rep.all_pass ? 1 : 0;
    if (!rep.all_pass) return fail(QED_CHECK_FAILED, "one or more verification checks failed");
    return QED_OK;
  });
}

qed_status qed_kernel_selftest_json(uint64_t seed, char** json_out, int* all_pass) {
  if (json_out == nullptr) return fail(QED_INVALID_ARGUMENT, "null argument");
  *json_out = nullptr;
  return guard([&] {
    const auto checks = qed::kernel_selftest(seed);
    *json_out = copy_string(qed::checks_to_json(checks, "kernel-selftest"));
    bool ok = true;
    for (const auto& c : checks) ok = ok && c.pass;
    if (all_pass) *all_pass = ok ? 1 : 0;
    if (!ok) return fail(QED_CHECK_FAILED, "elliptic kernel identities failed");
    return QED_OK;
  });
}

void qed_string_free(char* s) { std::free(s); }

const char* qed_last_error(void) { return g_last_error.c_str(); }

const char* qed_version(void) { return "1.0.0"; }

}  // extern "C"
