#ifndef SIGMAEVO_H
#define SIGMAEVO_H

/* C interface to the sigma-evolution toolkit. Every call returns a status;
   on failure sevo_last_error() describes the problem for the calling thread. */

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(SEVO_BUILDING_LIBRARY)
#define SEVO_API __attribute__((visibility("default")))
#else
#define SEVO_API
#endif

typedef enum sevo_status {
  SEVO_OK = 0,
  SEVO_CONFIG = 1,
  SEVO_NUMERIC = 2,
  SEVO_CHECK_FAILED = 3,
  SEVO_INVALID_ARGUMENT = 4,
  SEVO_INTERNAL = 5
} sevo_status;

typedef struct sevo_params {
  double sigma;
  int n;
  double m;
  double p;
  double eps_zone;
  double n_zone;
} sevo_params;

typedef struct sevo_model sevo_model;
typedef struct sevo_result sevo_result;

SEVO_API sevo_params sevo_default_params(void);

SEVO_API sevo_status sevo_model_create(const sevo_params* params, sevo_model** out);
SEVO_API void sevo_model_destroy(sevo_model* model);

/* Eigenvalues of the mode matrix at |xi|, labelled as in the branch tables. */
SEVO_API sevo_status sevo_eigenvalues(const sevo_model* model, double xi_mag, double re[3], double im[3]);

/* Exact linear propagation of one mode. state holds re/im pairs of
   (u_t + i|xi|^sigma u, u_t - i|xi|^sigma u, g*u - u, u). */
SEVO_API sevo_status sevo_propagate_mode(const sevo_model* model, double xi_mag, const double state_in[8], double t,
                                         double state_out[8]);

SEVO_API sevo_status sevo_p_crit(int n, double m, double sigma, double* out);

/* Runs a subcommand ("eigen", "linear-decay", ...) on a JSON config. When
   out_dir is non-NULL the manifest, summary and CSV files are written there.
   The result is returned for every parsed request, including failed runs; the
   status mirrors the run's exit code. */
SEVO_API sevo_status sevo_run(const char* subcommand, const char* config_json, const char* out_dir, uint64_t seed,
                              sevo_result** out);
SEVO_API int sevo_result_exit_code(const sevo_result* result);
SEVO_API const char* sevo_result_summary(const sevo_result* result);
SEVO_API const char* sevo_result_manifest(const sevo_result* result);
SEVO_API void sevo_result_destroy(sevo_result* result);

SEVO_API const char* sevo_last_error(void);
SEVO_API const char* sevo_status_string(sevo_status status);
SEVO_API const char* sevo_version(void);

#ifdef __cplusplus
}
#endif

#endif
