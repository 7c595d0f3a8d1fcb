#ifndef ECBASIS_ECBASIS_H
#define ECBASIS_ECBASIS_H

/* C interface of the EC-space B-basis kernel.
 *
 * Objects are opaque handles released with the matching *_free function.
 * Every fallible call returns an ecb_status; on failure the message of the
 * last error on the calling thread is available from ecb_last_error().
 * Matrices are passed row-major. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define ECB_API __declspec(dllexport)
#elif defined(__GNUC__)
#define ECB_API __attribute__((visibility("default")))
#else
#define ECB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ecb_status {
  ECB_OK = 0,
  ECB_INVALID_ARGUMENT,
  ECB_MISSING_ZERO_ROOT,
  ECB_INVALID_INTERVAL,
  ECB_ZERO_PIVOT,
  ECB_SINGULAR,
  ECB_ZERO_DIAGONAL,
  ECB_RANK_DEFICIENT,
  ECB_ILL_CONDITIONED,
  ECB_OUT_OF_DOMAIN,
  ECB_ZERO_DENOMINATOR,
  ECB_SEARCH_FAILED,
  ECB_NOT_A_SUBSPACE,
  ECB_INTERVAL_MISMATCH,
  ECB_DIMENSION_MISMATCH,
  ECB_SINGULAR_COLLOCATION,
  ECB_DEGENERATE_POINT,
  ECB_TOO_FEW_SAMPLES,
  ECB_IO_FAILURE,
  ECB_CONFIG_PARSE,
  ECB_INTERNAL
} ecb_status;

typedef enum ecb_direction { ECB_U0 = 0, ECB_U1 = 1 } ecb_direction;

typedef struct ecb_space ecb_space;
typedef struct ecb_curve ecb_curve;
typedef struct ecb_surface ecb_surface;
typedef struct ecb_mesh ecb_mesh;

/* Zero re + i*im of the characteristic polynomial; a non-real zero stands for
 * its conjugate pair. */
typedef struct ecb_zero {
  double re;
  double im;
  int multiplicity;
} ecb_zero;

typedef struct ecb_build_options {
  int check_conditioning;
  int expected_digits;
} ecb_build_options;

/* u^power e^{rate u} cos(frequency u) (phase 0) or sin(frequency u) (phase 1). */
typedef struct ecb_ordinary_function {
  int power;
  double rate;
  double frequency;
  int phase;
} ecb_ordinary_function;

typedef struct ecb_condition_report {
  double condition_number;
  int estimated_digits;
  const char* stage;
} ecb_condition_report;

typedef struct ecb_interval {
  double lower;
  double upper;
  double mean;
  double stddev;
  int count;
} ecb_interval;

ECB_API const char* ecb_last_error(void);
ECB_API const char* ecb_status_name(ecb_status status);

/* Spaces. options may be NULL. */
ECB_API ecb_status ecb_space_create(const ecb_zero* zeros, size_t count, double alpha, double beta,
                                    const ecb_build_options* options, ecb_space** out);
ECB_API void ecb_space_free(ecb_space* space);
ECB_API int ecb_space_dimension(const ecb_space* space);
ECB_API ecb_status ecb_space_interval(const ecb_space* space, double* alpha, double* beta);
ECB_API int ecb_space_reflection_invariant(const ecb_space* space);
/* Writes dimension values: the order-th derivatives of b_{n,0..n} at u. */
ECB_API ecb_status ecb_space_eval_basis(const ecb_space* space, int order, double u, double* out);
ECB_API ecb_status ecb_space_eval_ordinary(const ecb_space* space, int order, double u, double* out);
ECB_API ecb_status ecb_space_ordinary_function(const ecb_space* space, int k, ecb_ordinary_function* out);
/* LaTeX name of the k-th ordinary function; *needed receives the full length
 * including the terminator. */
ECB_API ecb_status ecb_space_ordinary_name(const ecb_space* space, int k, char* buffer, size_t capacity,
                                           size_t* needed);
ECB_API size_t ecb_space_report_count(const ecb_space* space);
ECB_API ecb_status ecb_space_report(const ecb_space* space, size_t index, ecb_condition_report* out);
/* dimension x dimension matrix T with phi = T b; flops may be NULL. */
ECB_API ecb_status ecb_space_transformation(const ecb_space* space, double* out, int64_t* flops);

ECB_API int64_t ecb_transformation_flop_count(int n);
ECB_API double ecb_kappa_lu(int n, int delta);

/* search_cap <= 0 selects the default. Infinite lengths are returned as
 * +infinity. */
ECB_API ecb_status ecb_critical_length(const ecb_zero* zeros, size_t count, double alpha, double search_cap,
                                       int for_design, double* out);

/* Curves with points in R^dim; control points are (dimension x dim). */
ECB_API ecb_status ecb_curve_create(const ecb_space* space, const double* points, size_t dim, ecb_curve** out);
ECB_API ecb_status ecb_curve_from_ordinary(const ecb_space* space, const double* coefficients, size_t dim,
                                           ecb_curve** out);
ECB_API void ecb_curve_free(ecb_curve* curve);
ECB_API size_t ecb_curve_point_count(const ecb_curve* curve);
ECB_API size_t ecb_curve_point_dimension(const ecb_curve* curve);
ECB_API ecb_status ecb_curve_control_points(const ecb_curve* curve, double* out);
ECB_API ecb_status ecb_curve_space(const ecb_curve* curve, ecb_space** out);
ECB_API ecb_status ecb_curve_eval(const ecb_curve* curve, int order, double u, double* out);
ECB_API ecb_status ecb_curve_subdivide(const ecb_curve* curve, double gamma, const ecb_build_options* options,
                                       ecb_curve** left, ecb_curve** right);
ECB_API ecb_status ecb_curve_elevate(const ecb_curve* curve, const ecb_space* target, ecb_curve** out);

/* Surfaces in R^3; the net holds rows x cols points (rows = dimension of the
 * u0 space), i.e. rows * cols * 3 doubles. */
ECB_API ecb_status ecb_surface_create(const ecb_space* u0, const ecb_space* u1, const double* net,
                                      ecb_surface** out);
/* Coordinate l has term_counts[l] separable terms. For coordinate 0 term 0,
 * coordinate 0 term 1, ..., u0_coefficients holds dim(u0) values per term and
 * u1_coefficients dim(u1) values per term. */
ECB_API ecb_status ecb_surface_from_separable(const ecb_space* u0, const ecb_space* u1, const size_t term_counts[3],
                                              const double* u0_coefficients, const double* u1_coefficients,
                                              ecb_surface** out);
ECB_API void ecb_surface_free(ecb_surface* surface);
ECB_API ecb_status ecb_surface_net_size(const ecb_surface* surface, size_t* rows, size_t* cols);
ECB_API ecb_status ecb_surface_net(const ecb_surface* surface, double* out);
ECB_API ecb_status ecb_surface_space(const ecb_surface* surface, ecb_direction direction, ecb_space** out);
ECB_API ecb_status ecb_surface_eval(const ecb_surface* surface, int j0, int j1, double u0, double u1, double* out);
ECB_API ecb_status ecb_surface_elevate(const ecb_surface* surface, ecb_direction direction, const ecb_space* target,
                                       ecb_surface** out);
ECB_API ecb_status ecb_surface_subdivide(const ecb_surface* surface, ecb_direction direction, double gamma,
                                         const ecb_build_options* options, ecb_surface** first,
                                         ecb_surface** second);
/* Field names: gaussian, mean, willmore, log_willmore, umbilic, log_umbilic,
 * total, log_total, coordinate, normal_length. out receives m0 * m1 values.
 * workers = 0 uses every hardware thread. */
ECB_API ecb_status ecb_surface_field(const ecb_surface* surface, int m0, int m1, const char* kind, unsigned workers,
                                     double* out);
/* Lines with direction as the free parameter. params receives lines * samples
 * values, values lines * samples * (d_max + 1) * 3. */
ECB_API ecb_status ecb_surface_isolines(const ecb_surface* surface, ecb_direction direction, int lines, int samples,
                                        int d_max, double* params, double* values);
/* field may be NULL for a uniformly colored mesh. */
ECB_API ecb_status ecb_surface_tessellate(const ecb_surface* surface, int m0, int m1, const char* field,
                                          unsigned workers, ecb_mesh** out);

ECB_API void ecb_mesh_free(ecb_mesh* mesh);
ECB_API ecb_status ecb_mesh_counts(const ecb_mesh* mesh, size_t* vertices, size_t* faces);
ECB_API ecb_status ecb_mesh_write_obj(const ecb_mesh* mesh, const char* path);

/* Files. rows holds row_count * columns values. */
ECB_API ecb_status ecb_write_csv(const char* path, const char* const* header, size_t columns, const double* rows,
                                 size_t row_count);
/* Polyline k has lengths[k] points, stored consecutively in xs and ys.
 * labels may be NULL. */
ECB_API ecb_status ecb_write_svg(const char* path, const char* title, size_t line_count, const size_t* lengths,
                                 const double* xs, const double* ys, const char* const* labels);

ECB_API ecb_status ecb_confidence_interval(const double* samples, size_t count, double significance,
                                           ecb_interval* out);

#ifdef __cplusplus
}
#endif

#endif
