#ifndef RELINDEX_H
#define RELINDEX_H

/* C interface to librelindex. Every fallible call returns a relindex_status;
 * on failure relindex_last_error() describes the cause (per thread).
 * Handles are opaque and released with their *_free function; freeing NULL
 * is allowed. Matrices are passed row-major. */

#include <stddef.h>
#include <stdint.h>

#if defined(RELINDEX_BUILDING_LIBRARY)
#define RELINDEX_API __attribute__((visibility("default")))
#else
#define RELINDEX_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum relindex_status {
  RELINDEX_OK = 0,
  RELINDEX_INVALID_ARGUMENT = 1,
  RELINDEX_DIMENSION = 2,
  RELINDEX_PRECONDITION = 3,
  RELINDEX_CONVERGENCE = 4,
  RELINDEX_TOLERANCE = 5,
  RELINDEX_IO = 6,
  RELINDEX_CONFIG = 7,
  RELINDEX_INTERNAL = 8
} relindex_status;

typedef struct relindex_complex {
  double re;
  double im;
} relindex_complex;

typedef struct relindex_vec2 {
  double x;
  double y;
} relindex_vec2;

typedef enum relindex_method {
  RELINDEX_SPECTRAL_COUNT = 0,
  RELINDEX_ODD_TRACE = 1,
  RELINDEX_FEDOSOV = 2
} relindex_method;

typedef struct relindex_index_report {
  double value;
  relindex_method method;
  int trace_power;
  double residual; /* |value - round(value)| */
  double imag;     /* discarded imaginary part */
} relindex_index_report;

RELINDEX_API const char* relindex_version(void);
RELINDEX_API const char* relindex_last_error(void);
RELINDEX_API const char* relindex_status_name(relindex_status status);
/* Releases strings returned through char** out-parameters. */
RELINDEX_API void relindex_string_free(char* s);

/* ---- projection pairs ---- */

typedef struct relindex_projection relindex_projection;
typedef struct relindex_unitary relindex_unitary;

RELINDEX_API relindex_status relindex_projection_create(const relindex_complex* data, int dim,
                                                        double idempotency_tol,
                                                        relindex_projection** out);
/* Span of `rank` columns of a Haar unitary drawn from `seed`. */
RELINDEX_API relindex_status relindex_projection_random(int dim, int rank, uint64_t seed,
                                                        relindex_projection** out);
RELINDEX_API relindex_status relindex_projection_complement(const relindex_projection* p,
                                                            relindex_projection** out);
/* U P U^dagger */
RELINDEX_API relindex_status relindex_projection_conjugate(const relindex_projection* p,
                                                           const relindex_unitary* u,
                                                           relindex_projection** out);
RELINDEX_API int relindex_projection_dim(const relindex_projection* p);
RELINDEX_API relindex_status relindex_projection_matrix(const relindex_projection* p,
                                                        relindex_complex* data);
RELINDEX_API void relindex_projection_free(relindex_projection* p);

RELINDEX_API relindex_status relindex_unitary_create(const relindex_complex* data, int dim,
                                                     double unitarity_tol,
                                                     relindex_unitary** out);
RELINDEX_API relindex_status relindex_unitary_random(int dim, uint64_t seed,
                                                     relindex_unitary** out);
RELINDEX_API void relindex_unitary_free(relindex_unitary* u);

RELINDEX_API relindex_status relindex_index_spectral(const relindex_projection* p,
                                                     const relindex_projection* q,
                                                     double eig_tol, relindex_index_report* out);
/* Tr (P - Q)^(2n+1) */
RELINDEX_API relindex_status relindex_index_odd_trace(const relindex_projection* p,
                                                      const relindex_projection* q, int n,
                                                      relindex_index_report* out);
RELINDEX_API relindex_status relindex_index_fedosov(const relindex_projection* p,
                                                    const relindex_unitary* u, int n,
                                                    relindex_index_report* out);
/* Index(P,R) and Index(P,Q) + Index(Q,R). */
RELINDEX_API relindex_status relindex_additivity(const relindex_projection* p,
                                                 const relindex_projection* q,
                                                 const relindex_projection* r, double eig_tol,
                                                 long* lhs, long* rhs);

/* ---- gauge unitaries and switches ---- */

typedef struct relindex_gauge relindex_gauge;

/* z^alpha / |z|^alpha; non-integer alpha is rejected. */
RELINDEX_API relindex_status relindex_gauge_flux(double alpha, relindex_gauge** out);
RELINDEX_API relindex_status relindex_gauge_translate(const relindex_gauge* u, relindex_vec2 t,
                                                      relindex_gauge** out);
RELINDEX_API relindex_status relindex_gauge_product(const relindex_gauge* a,
                                                    const relindex_gauge* b,
                                                    relindex_gauge** out);
RELINDEX_API relindex_status relindex_gauge_evaluate(const relindex_gauge* u, relindex_vec2 x,
                                                     relindex_complex* out);
RELINDEX_API int relindex_gauge_winding(const relindex_gauge* u);
RELINDEX_API relindex_status relindex_gauge_numerical_winding(const relindex_gauge* u,
                                                              relindex_vec2 center,
                                                              double radius, int nodes,
                                                              int* winding, double* residual);
RELINDEX_API void relindex_gauge_free(relindex_gauge* u);

typedef enum relindex_switch_kind { RELINDEX_SWITCH_TANH = 0, RELINDEX_SWITCH_ERF = 1 } relindex_switch_kind;

RELINDEX_API relindex_status relindex_switch_integral_1d(relindex_switch_kind kind, double scale,
                                                         double a, double tol, double* out);
RELINDEX_API relindex_status relindex_switch_integral_2d(relindex_switch_kind kind, double scale,
                                                         relindex_vec2 a, relindex_vec2 b,
                                                         double tol, double* out);

/* ---- kernels ---- */

typedef struct relindex_kernel relindex_kernel;

/* Projection onto Landau level m (0..4), field B = 2. */
RELINDEX_API relindex_status relindex_kernel_landau(int m, relindex_kernel** out);
/* Real gaussian (1/pi) exp(-|x-y|^2/2). */
RELINDEX_API relindex_status relindex_kernel_real_gaussian(relindex_kernel** out);
RELINDEX_API relindex_status relindex_kernel_evaluate(const relindex_kernel* k, relindex_vec2 x,
                                                      relindex_vec2 y, relindex_complex* out);
RELINDEX_API void relindex_kernel_free(relindex_kernel* k);

/* ---- quadrature ---- */

typedef struct relindex_quadrature_spec {
  double outer_radius;
  double puncture_radius;
  int radial_nodes;
  int angular_nodes;
  int axis_nodes;
  int64_t mc_samples;
  uint64_t seed;
  double target_tol;
} relindex_quadrature_spec;

RELINDEX_API void relindex_quadrature_spec_default(relindex_quadrature_spec* spec);

RELINDEX_API relindex_status relindex_connes_area(const relindex_gauge* u,
                                                  const relindex_vec2 triangle[3],
                                                  const relindex_quadrature_spec* spec,
                                                  relindex_complex* value, double* tail_error);
RELINDEX_API relindex_status relindex_index_integral_4d(const relindex_kernel* k, int winding,
                                                        const relindex_quadrature_spec* spec,
                                                        relindex_complex* out);
RELINDEX_API relindex_status relindex_index_integral_6d_mc(const relindex_kernel* k,
                                                           const relindex_gauge* u,
                                                           const relindex_quadrature_spec* spec,
                                                           relindex_complex* out,
                                                           double* std_error);
RELINDEX_API relindex_status relindex_trace_from_diagonal(const relindex_kernel* k,
                                                          double radius, relindex_complex* out);

/* ---- Landau levels ---- */

RELINDEX_API relindex_status relindex_landau_wavefunction(int n, int m, relindex_vec2 z,
                                                          relindex_complex* out);
/* (n_max+1)^2 entries <n,m| z/|z| |n',m>, rows n. */
RELINDEX_API relindex_status relindex_flux_matrix(int m, int n_max, relindex_complex* data,
                                                  double* pattern_residual);
RELINDEX_API relindex_status relindex_shift_index(const relindex_complex* data, int rows,
                                                  int cols, double zero_tol, int* shift);
/* Index(P_m U P_m) from the polar-grid truncation, reported as -Tr(P - UPU^dagger)^(2n+1). */
RELINDEX_API relindex_status relindex_truncated_landau_index(int m, const relindex_gauge* u,
                                                             double radius, int radial_nodes,
                                                             int angular_nodes, int n,
                                                             relindex_index_report* out);

/* ---- Hall transport ---- */

RELINDEX_API relindex_status relindex_hall_closed_form(const relindex_kernel* k,
                                                       const relindex_quadrature_spec* spec,
                                                       double* q);
/* tanh switches of the given scale on both axes. */
RELINDEX_API relindex_status relindex_hall_transport_box(const relindex_kernel* k,
                                                         double switch_scale,
                                                         const double* half_sides, int count,
                                                         const relindex_quadrature_spec* spec,
                                                         double* q);
RELINDEX_API relindex_status relindex_kubo_box(const relindex_kernel* k, double half_side,
                                               const relindex_quadrature_spec* spec,
                                               double* sigma);
RELINDEX_API relindex_status relindex_curvature_diagonal(const relindex_kernel* k,
                                                         double switch_scale, relindex_vec2 x,
                                                         const relindex_quadrature_spec* spec,
                                                         relindex_complex* out);

/* ---- magnetic lattice ---- */

typedef struct relindex_lattice relindex_lattice;

typedef enum relindex_lattice_gauge {
  RELINDEX_GAUGE_LANDAU = 0,
  RELINDEX_GAUGE_SYMMETRIC = 1
} relindex_lattice_gauge;

RELINDEX_API relindex_status relindex_lattice_create(int width, int height, long flux_p,
                                                     long flux_q, relindex_lattice_gauge gauge,
                                                     relindex_lattice** out);
/* Per-site values indexed i*height + j. */
RELINDEX_API relindex_status relindex_lattice_set_potential(relindex_lattice* lat,
                                                            const double* values, size_t count);
RELINDEX_API relindex_status relindex_lattice_set_mask(relindex_lattice* lat,
                                                       const unsigned char* keep, size_t count);
RELINDEX_API relindex_status relindex_lattice_set_wedge(relindex_lattice* lat, relindex_vec2 apex,
                                                        double angle_deg);
/* Builds the Hamiltonian and the projection below `fermi`. */
RELINDEX_API relindex_status relindex_lattice_solve(relindex_lattice* lat, double fermi,
                                                    long* rank, double* gap_width);
RELINDEX_API long relindex_lattice_sites(const relindex_lattice* lat);
/* Localized Tr(P - UPU^dagger)^(2n+1) with U the flux tube at `center`. */
RELINDEX_API relindex_status relindex_lattice_index(const relindex_lattice* lat,
                                                    relindex_vec2 center, int n, int margin,
                                                    int require_deep_center,
                                                    relindex_index_report* out);
RELINDEX_API relindex_status relindex_lattice_decay_fit(const relindex_lattice* lat, int margin,
                                                        double* rate, double* r_squared);
/* Index per seed under uniform [-amplitude, amplitude] on-site disorder;
 * rejected[i] is 1 where the bulk gap closed. */
RELINDEX_API relindex_status relindex_lattice_disorder(const relindex_lattice* lat, double fermi,
                                                       double amplitude, const uint64_t* seeds,
                                                       int count, relindex_vec2 center, int n,
                                                       int margin, double* values,
                                                       int* rejected);
RELINDEX_API void relindex_lattice_free(relindex_lattice* lat);

/* ---- experiments ---- */

RELINDEX_API int relindex_experiment_count(void);
RELINDEX_API const char* relindex_experiment_name(int i);
RELINDEX_API relindex_status relindex_experiment_default_config(const char* name, char** json);
/* Defaults, then `file_json` (may be NULL), then "key.path=value" assignments. */
RELINDEX_API relindex_status relindex_config_resolve(const char* name, const char* file_json,
                                                     const char* const* assignments, int count,
                                                     char** resolved_json);
/* Runs with a config, writes report files into out_dir (NULL: none) in
 * `format` (csv, json, both). report_json may be NULL. */
RELINDEX_API relindex_status relindex_experiment_run(const char* name, const char* config_json,
                                                     const char* out_dir, const char* format,
                                                     int* all_pass, char** report_json);

#ifdef __cplusplus
}
#endif

#endif
