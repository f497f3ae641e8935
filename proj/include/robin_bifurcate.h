/* C interface to the robin-bifurcate solver library.
 *
 * All objects are opaque handles created and destroyed through this API.
 * Every function returns an rb_status; on failure a message is available from
 * rb_last_error_message() on the calling thread until the next call.
 */
#ifndef ROBIN_BIFURCATE_H
#define ROBIN_BIFURCATE_H

#include <stddef.h>

#if defined(RB_BUILDING_LIBRARY)
#define RB_API __attribute__((visibility("default")))
#else
#define RB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rb_status {
  RB_OK = 0,
  RB_ERR_SYNTAX,
  RB_ERR_UNKNOWN_IDENTIFIER,
  RB_ERR_EVALUATION,
  RB_ERR_ZERO_CERTIFICATION,
  RB_ERR_POSITIVITY,
  RB_ERR_SHIFT_CERTIFICATION,
  RB_ERR_QUADRATURE,
  RB_ERR_SINGULAR_OPERATOR,
  RB_ERR_LENGTH_MISMATCH,
  RB_ERR_ITERATION_LIMIT,
  RB_ERR_NEWTON_STALLED,
  RB_ERR_ESCAPE_BELOW,
  RB_ERR_ESCAPE_ABOVE,
  RB_ERR_POWER_ITERATION,
  RB_ERR_NO_UPPER_BRACKET,
  RB_ERR_MULTIPLICITY_NOT_OBSERVED,
  RB_ERR_AREA_CONDITION_FAILS,
  RB_ERR_BRANCH_LOST,
  RB_ERR_NOT_DIRICHLET,
  RB_ERR_NO_INNER_SOLUTION,
  RB_ERR_CONFIG,
  RB_ERR_IO,
  RB_ERR_INVALID_ARGUMENT,
  RB_ERR_NULL_POINTER,
  RB_ERR_INTERNAL
} rb_status;

typedef enum rb_bc_kind { RB_BC_ROBIN = 0, RB_BC_NEUMANN = 1, RB_BC_DIRICHLET = 2 } rb_bc_kind;

typedef enum rb_source { RB_SOURCE_MONOTONE = 0, RB_SOURCE_SHOOTING = 1, RB_SOURCE_NEWTON = 2 } rb_source;

typedef struct rb_nonlinearity rb_nonlinearity;
typedef struct rb_solution_set rb_solution_set;
typedef struct rb_diagram rb_diagram;

typedef struct rb_problem {
  int dim;            /* N >= 1 */
  double radius;      /* R > 0 */
  rb_bc_kind bc_kind;
  double gamma;       /* used for RB_BC_ROBIN, must be > 0 */
  int grid_n;         /* grid intervals, >= 64; 0 selects 1024 */
} rb_problem;

typedef struct rb_area_report {
  int holds;
  int has_r_alpha;
  double r_alpha;
  int degenerate;
  double worst_s;
  double worst_value;
} rb_area_report;

typedef struct rb_solution_summary {
  double sup_norm;
  double min_value;
  double center_value;
  double boundary_value;
  double boundary_slope;
  double residual;
  rb_source source;
  int in_order_interval;
} rb_solution_summary;

typedef struct rb_overrides {
  int has_lambda;
  double lambda;
  int has_gamma; /* 0 -> Neumann, INFINITY -> Dirichlet */
  double gamma;
  int has_n;
  int n;
  const char* out_prefix; /* NULL to keep the config outputs */
} rb_overrides;

RB_API const char* rb_version(void);
RB_API const char* rb_status_name(rb_status status);
RB_API const char* rb_last_error_message(void);

/* Nonlinearity */
RB_API rb_status rb_nonlinearity_create(const char* expr, double alpha, double beta, double domain_floor,
                                        rb_nonlinearity** out);
RB_API rb_status rb_nonlinearity_truncate(const rb_nonlinearity* nl, rb_nonlinearity** out);
RB_API void rb_nonlinearity_destroy(rb_nonlinearity* nl);
RB_API rb_status rb_nonlinearity_eval(const rb_nonlinearity* nl, double s, double* value, double* derivative);
RB_API rb_status rb_nonlinearity_shift(const rb_nonlinearity* nl, double* shift);
RB_API rb_status rb_antiderivative(const rb_nonlinearity* nl, double a, double b, double* value);
RB_API rb_status rb_area_condition(const rb_nonlinearity* nl, rb_area_report* out);

/* Solutions at one lambda */
RB_API rb_status rb_find_radial_solutions(const rb_nonlinearity* nl, const rb_problem* problem, double lambda,
                                          rb_solution_set** out);
RB_API rb_status rb_monotone_iterate(const rb_nonlinearity* nl, const rb_problem* problem, double lambda,
                                     rb_solution_set** out);
RB_API rb_status rb_solution_set_size(const rb_solution_set* set, size_t* size);
RB_API rb_status rb_solution_summary_at(const rb_solution_set* set, size_t index, rb_solution_summary* out);
/* Copies up to `capacity` profile values; `*count` receives the full length. */
RB_API rb_status rb_solution_values(const rb_solution_set* set, size_t index, double* values, size_t capacity,
                                    size_t* count);
RB_API void rb_solution_set_destroy(rb_solution_set* set);

/* Thresholds */
RB_API rb_status rb_lambda_min(const rb_nonlinearity* nl, const rb_problem* problem, double tol, double* out);
RB_API rb_status rb_lambda_mult(const rb_nonlinearity* nl, const rb_problem* problem, double tol, double* out);
RB_API rb_status rb_lambda_infty(const rb_nonlinearity* nl, const rb_problem* problem, double tol, double* out);

/* Diagrams */
RB_API rb_status rb_sweep_lambda(const rb_nonlinearity* nl, const rb_problem* problem, const double* lambdas,
                                 size_t count, rb_diagram** out);
RB_API rb_status rb_diagram_size(const rb_diagram* diagram, size_t* points);
RB_API rb_status rb_diagram_point(const rb_diagram* diagram, size_t index, double* param, int* count_in_order_interval);
RB_API rb_status rb_diagram_write_csv(const rb_diagram* diagram, const char* path);
RB_API void rb_diagram_destroy(rb_diagram* diagram);

/* Full CLI pipeline: mode may be NULL to use the config's mode. The JSON
 * summary goes to stdout unless an output path is configured. */
RB_API rb_status rb_run(const char* mode, const char* config_path, const rb_overrides* overrides, int* exit_code);

#ifdef __cplusplus
}
#endif

#endif /* ROBIN_BIFURCATE_H */
