/* curvlab C API: stable extern "C" surface over the C++ core.
 *
 * All functions return a curvlab_status (CURVLAB_OK on success); constructors
 * hand back opaque handles that must be released with the matching _free.
 * Detailed error text for the most recent failure on the calling thread is
 * available via curvlab_last_error().
 */
#ifndef CURVLAB_H
#define CURVLAB_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef int curvlab_status;

enum {
  CURVLAB_OK = 0,
  CURVLAB_E_INVALID_ARGUMENT = 1,
  CURVLAB_E_CONFIG = 2,
  CURVLAB_E_IO = 3,
  CURVLAB_E_EVAL_AT_ATOM = 4,
  CURVLAB_E_ATOM_ON_CIRCLE = 5,
  CURVLAB_E_SEGMENT_OUT_OF_DOMAIN = 6,
  CURVLAB_E_SOURCE_OUT_OF_DOMAIN = 7,
  CURVLAB_E_ANNULUS_OUT_OF_DOMAIN = 8,
  CURVLAB_E_REGION_OUT_OF_DOMAIN = 9,
  CURVLAB_E_NONZERO_TOTAL_MASS = 10,
  CURVLAB_E_NO_DENSITY_REPRESENTABLE = 11,
  CURVLAB_E_DIVERGENT = 12,
  CURVLAB_E_NOT_BORDERLINE_ATOM = 13,
  CURVLAB_E_CURVE_TOO_SHORT = 14,
  CURVLAB_E_PRECONDITION = 15,
  CURVLAB_E_ASSERTION_FAILED = 16, /* scenario ran, some PASS assertion failed */
  CURVLAB_E_INTERNAL = 99
};

typedef struct curvlab_metric curvlab_metric;
typedef struct curvlab_measure curvlab_measure;
typedef struct curvlab_field curvlab_field;

/* Thread-local message for the last failing call in this thread. */
const char* curvlab_last_error(void);
const char* curvlab_status_name(curvlab_status status);

/* Strings returned through char** are heap-allocated; release them here. */
void curvlab_string_free(char* s);

/* ---- metrics ------------------------------------------------------------ */

/* params_json: JSON object of builtin parameters, e.g. "{\"beta\":0.3}";
 * NULL or "" for defaults. */
curvlab_status curvlab_metric_create_builtin(const char* name, const char* params_json,
                                             curvlab_metric** out);
curvlab_status curvlab_metric_from_json(const char* json_text, curvlab_metric** out);
curvlab_status curvlab_metric_to_json(const curvlab_metric* m, char** out_json);
void curvlab_metric_free(curvlab_metric* m);

curvlab_status curvlab_metric_eval_u(const curvlab_metric* m, double x, double y, double* out);
curvlab_status curvlab_metric_circle_mean(const curvlab_metric* m, double cx, double cy,
                                          double r, double* out);
curvlab_status curvlab_metric_point_mass_detect(const curvlab_metric* m, double cx, double cy,
                                                double h, double* out);
curvlab_status curvlab_metric_curvature(const curvlab_metric* m, char** out_measure_json);

/* ---- measures ----------------------------------------------------------- */

curvlab_status curvlab_measure_from_json(const char* json_text, curvlab_measure** out);
curvlab_status curvlab_measure_to_json(const curvlab_measure* mu, char** out_json);
void curvlab_measure_free(curvlab_measure* mu);

curvlab_status curvlab_measure_total_variation(const curvlab_measure* mu, double* out);
curvlab_status curvlab_measure_log_potential(const curvlab_measure* mu, double x, double y,
                                             double* out);

/* ---- distance fields ---------------------------------------------------- */

typedef struct curvlab_grid_options {
  int cells;   /* lattice cells across the extent; 0 = 512 (h = 1/256 on [-1,1]^2) */
  int stencil; /* 8, 16 or 32; 0 = 16 */
} curvlab_grid_options;

curvlab_status curvlab_distance(const curvlab_metric* m, double x0, double y0, double x1,
                                double y1, const curvlab_grid_options* opt, double* out);
curvlab_status curvlab_distance_field(const curvlab_metric* m, double src_x, double src_y,
                                      const curvlab_grid_options* opt, curvlab_field** out);
void curvlab_field_free(curvlab_field* f);

curvlab_status curvlab_field_size(const curvlab_field* f, int* nx, int* ny);
curvlab_status curvlab_field_value(const curvlab_field* f, int i, int j, double* out);
curvlab_status curvlab_field_at(const curvlab_field* f, double x, double y, double* out);
/* CSV rows "x,y,value" plus a JSON sidecar with source, h and stencil. */
curvlab_status curvlab_field_export(const curvlab_field* f, const char* csv_path,
                                    const char* json_sidecar_path);

/* ---- scenarios ---------------------------------------------------------- */

typedef struct curvlab_run_options {
  int stencil; /* 0 = from file */
  int grid;    /* 0 = from file */
  int threads; /* 0 = CURVLAB_THREADS or 1 */
} curvlab_run_options;

/* Runs a scenario file and writes its reports under out_dir. Returns
 * CURVLAB_OK when every PASS assertion held, CURVLAB_E_ASSERTION_FAILED when
 * the experiment ran but an assertion failed, CURVLAB_E_CONFIG for malformed
 * scenarios and other codes for module errors. */
curvlab_status curvlab_run_scenario(const char* scenario_path, const char* out_dir,
                                    const curvlab_run_options* opt);

/* Catalog of builtin metrics and their parameters. */
curvlab_status curvlab_list_builtins(char** out_text);

#ifdef __cplusplus
}
#endif

#endif /* CURVLAB_H */
