/* C interface to the growth-model laboratory. All handles are opaque; every
 * function returns a gl_status and reports details through gl_last_error(). */
#ifndef GROWTHLAB_H
#define GROWTHLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(GROWTHLAB_BUILDING)
#define GL_API __attribute__((visibility("default")))
#else
#define GL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gl_status {
  GL_OK = 0,
  GL_INVALID_ARGUMENT = 1,
  GL_DOMAIN = 2,
  GL_CONFIG = 3,
  GL_RESOURCE = 4,
  GL_INTERNAL = 5
} gl_status;

typedef struct gl_driver gl_driver;
typedef struct gl_field gl_field;
typedef struct gl_operator gl_operator;

/* Message for the last failing call on this thread ("" if none). */
GL_API const char* gl_last_error(void);
GL_API const char* gl_status_name(gl_status status);

/* Strings returned by the library are released with gl_string_free. */
GL_API void gl_string_free(char* s);

typedef struct gl_driver_params {
  const char* potential; /* argmin: power | fractional | abs | flatwell */
  int k;
  double delta;
  double a;
  const char* phi; /* smooth_phi: kpz | heat */
} gl_driver_params;

GL_API gl_driver_params gl_driver_params_default(void);

/* name: max | pospart | smooth_phi | argmin | median | rsos. params may be NULL. */
GL_API gl_status gl_driver_create(const char* name, int dim, const gl_driver_params* params, gl_driver** out);
GL_API void gl_driver_destroy(gl_driver* driver);
/* neighbours holds 2*dim values: index 2i is x+e_{i+1}, 2i+1 is x-e_{i+1}. */
GL_API gl_status gl_driver_apply(const gl_driver* driver, double centre, const double* neighbours, size_t count,
                                 double* out);
/* *parabolic = 1 for parabolic scaling, 0 for hyperbolic. */
GL_API gl_status gl_driver_scaling(const gl_driver* driver, int* parabolic);

/* Step-0 field for the registered initial data on the window [lo, hi] plus a
 * halo of `steps` cells. */
GL_API gl_status gl_field_init(const char* initial, int dim, const double* lo, const double* hi, int64_t steps,
                               double epsilon, int parabolic, gl_field** out);
GL_API void gl_field_destroy(gl_field* field);
/* Writes a new field (box shrunk by one cell per face); the input is unchanged. */
GL_API gl_status gl_field_step(const gl_field* field, const gl_driver* driver, gl_field** out);
GL_API gl_status gl_field_dim(const gl_field* field, int* dim);
GL_API gl_status gl_field_box(const gl_field* field, int64_t* lo, int64_t* hi);
GL_API gl_status gl_field_value(const gl_field* field, const int64_t* site, double* out);

/* name: hj_max | hj_pospart | smooth_ah | weighted_power | weighted_fractional | median | crystalline. */
GL_API gl_status gl_operator_create(const char* name, int dim, int k, double delta, gl_operator** out);
GL_API void gl_operator_destroy(gl_operator* op);
/* X is dim*dim row-major. Off the singular set *upper == *lower. */
GL_API gl_status gl_operator_eval(const gl_operator* op, const double* X, const double* p, double* upper,
                                  double* lower, int* singular);

/* Runs a convergence experiment described by config text; writes CSV and
 * JSON under out_dir. *summary receives a human-readable report. */
GL_API gl_status gl_run_config(const char* config_text, const char* out_dir, uint64_t seed, int verbosity,
                               char** summary, int* all_pass);
/* Consistency sweeps described by config text. */
GL_API gl_status gl_consistency_config(const char* config_text, const char* out_dir, uint64_t seed, int verbosity,
                                       char** summary, int* all_pass);
/* Full property suite; *table receives the pass/fail matrix. */
GL_API gl_status gl_properties(uint64_t seed, char** table, int* all_pass);
/* Registered drivers, potentials, operators and initial data. */
GL_API gl_status gl_list(char** text);

#ifdef __cplusplus
}
#endif

#endif
