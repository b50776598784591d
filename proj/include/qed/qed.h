#ifndef QED_QED_H
#define QED_QED_H

/* Quasi-exceptional domains: construction, verification and plotting of the
 * conformal maps f: G -> one period of a doubly connected periodic domain on
 * which a positive harmonic function has unit normal derivative on the
 * boundary. All functions are thread safe for distinct handles; a map handle
 * may be shared between threads for read-only calls. */

#include <stddef.h>
#include <stdint.h>

#if defined(QED_BUILDING_LIBRARY)
#define QED_API __attribute__((visibility("default")))
#else
#define QED_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qed_status {
  QED_OK = 0,
  QED_INVALID_ARGUMENT = 1,
  QED_POLE = 2,          /* evaluation too close to a singular point */
  QED_QUADRATURE = 3,    /* adaptive quadrature did not converge */
  QED_CONSTRUCTION = 4,  /* a construction constant failed its check */
  QED_IO = 5,
  QED_CHECK_FAILED = 6,  /* verification ran but a check did not pass */
  QED_INTERNAL = 99
} qed_status;

typedef enum qed_domain_kind { QED_TYPE_I = 1, QED_TYPE_II = 2 } qed_domain_kind;

typedef enum qed_normalization {
  QED_NORMALIZATION_NEUMANN_UNIT = 0,   /* |grad u| = 1 on the boundary */
  QED_NORMALIZATION_RAW_SIGMA_RATIO = 1 /* F is the bare sigma quotient */
} qed_normalization;

typedef enum qed_format { QED_FORMAT_CSV = 0, QED_FORMAT_SVG = 1, QED_FORMAT_JSON = 2 } qed_format;

typedef enum qed_quantity {
  QED_EVAL_F = 0,      /* derivative of the map */
  QED_EVAL_MAP = 1,    /* f(z), with f(omega) = 0 */
  QED_EVAL_IMAGE = 2,  /* f(z) in the aligned image frame used by plots */
  QED_EVAL_VZ = 3,     /* dv/dz of the roof function */
  QED_EVAL_B = 4,      /* the B factor */
  QED_EVAL_V = 5       /* roof function v(z), returned in re, im = 0 */
} qed_quantity;

typedef struct qed_complex {
  double re;
  double im;
} qed_complex;

typedef struct qed_spec {
  qed_domain_kind kind;
  double omega;             /* real half period; the period of G is 4*omega */
  double omega_prime_imag;  /* height of G */
  double epsilon;           /* pole height, Type II only */
  int samples_per_side;
  qed_normalization normalization;
} qed_spec;

typedef struct qed_map qed_map;
typedef struct qed_trace qed_trace;

/* Type II, omega = 1, omega_prime_imag = 2, epsilon = 0.5, 1024 samples. */
QED_API void qed_spec_default(qed_spec* spec);

QED_API qed_status qed_map_create(const qed_spec* spec, qed_map** out);
QED_API void qed_map_destroy(qed_map* map);
QED_API qed_status qed_map_eval(const qed_map* map, qed_quantity what, qed_complex z,
                                qed_complex* out);
QED_API size_t qed_map_warning_count(const qed_map* map);
/* Borrowed string, valid while the map lives; NULL when out of range. */
QED_API const char* qed_map_warning(const qed_map* map, size_t index);
/* Construction constants and a trace summary as JSON. */
QED_API qed_status qed_map_summary_json(const qed_map* map, char** json_out);

/* Boundary trace. samples_per_side <= 0 uses the spec value. */
QED_API qed_status qed_trace_create(const qed_map* map, int samples_per_side,
                                    qed_trace** out);
QED_API void qed_trace_destroy(qed_trace* trace);
QED_API size_t qed_trace_curve_count(const qed_trace* trace);
/* Borrowed pointers, valid while the trace lives. */
QED_API qed_status qed_trace_curve(const qed_trace* trace, size_t index, const char** label,
                                   const qed_complex** points, size_t* count, int* closed);

/* Boundary curves as plotted (two periods for Type II, clipped arcs for
 * Type I). */
QED_API qed_status qed_plot_write(const qed_map* map, qed_format format, const char* path);
/* Streamlines at n_levels levels together with the boundary curves. */
QED_API qed_status qed_flow_write(const qed_map* map, int n_levels, qed_format format,
                                  const char* path);

/* Full verification battery. Returns QED_OK when every check passes and
 * QED_CHECK_FAILED otherwise; the report is produced in both cases.
 * inject_error perturbs the zero-period integrand. */
QED_API qed_status qed_verify_json(const qed_map* map, uint64_t seed, int inject_error,
                                   char** json_out, int* all_pass);
/* Elliptic identity suite on three fixed lattices. */
QED_API qed_status qed_kernel_selftest_json(uint64_t seed, char** json_out, int* all_pass);

QED_API void qed_string_free(char* s);
/* Message of the last failed call on this thread; empty if none. */
QED_API const char* qed_last_error(void);
QED_API const char* qed_version(void);

#ifdef __cplusplus
}
#endif

#endif
