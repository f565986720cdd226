/* Stochastic cubic NLS solvers: C interface. */
#ifndef SNLS_SNLS_H
#define SNLS_SNLS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SNLS_BUILDING_LIBRARY)
#    define SNLS_API __declspec(dllexport)
#  else
#    define SNLS_API __declspec(dllimport)
#  endif
#else
#  define SNLS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum snls_status {
  SNLS_OK = 0,
  SNLS_ERR_INVALID_ARGUMENT = 1,
  SNLS_ERR_CONFIG = 2,
  SNLS_ERR_SOLVER_DIVERGENCE = 3,
  SNLS_ERR_EXPERIMENT_ABORTED = 4,
  SNLS_ERR_IO = 5,
  SNLS_ERR_USAGE = 6,
  SNLS_ERR_INTERNAL = 7
} snls_status;

typedef enum snls_scheme { SNLS_SCHEME_SPECTRAL = 0, SNLS_SCHEME_FINITE_DIFFERENCE = 1 } snls_scheme;

typedef struct snls_config snls_config;
typedef struct snls_noise_path snls_noise_path;
typedef struct snls_state snls_state;
typedef struct snls_error_table snls_error_table;

typedef struct snls_observables {
  double charge;
  double energy;
  double lyapunov;
  double h1_norm;
} snls_observables;

SNLS_API const char* snls_version(void);

/* Message of the last failure on this thread ("" if none). */
SNLS_API const char* snls_last_error(void);
/* Config key named by the last SNLS_ERR_CONFIG on this thread ("" if none). */
SNLS_API const char* snls_last_error_key(void);

/* ---- run configuration ---------------------------------------------------- */

/* Parses `key = value` text. overrides holds count "key=value" strings that
   win over the text. */
SNLS_API snls_status snls_config_parse(const char* text, const char* const* overrides,
                                       size_t count, snls_config** out);
SNLS_API snls_status snls_config_parse_file(const char* path, const char* const* overrides,
                                            size_t count, snls_config** out);
/* Effective value of a key as text. The pointer lives as long as the config. */
SNLS_API snls_status snls_config_get(const snls_config* cfg, const char* key, const char** value);
/* All effective keys as "# key: value" lines. */
SNLS_API const char* snls_config_describe(const snls_config* cfg);
SNLS_API void snls_config_free(snls_config* cfg);

SNLS_API int snls_is_subcommand(const char* name);
SNLS_API const char* snls_usage(void);
/* Preset selected by --paper-scale for a subcommand, "" when none. */
SNLS_API const char* snls_paper_scale_preset(const char* subcommand);
/* Worker count from SNLS_WORKERS, 1 when unset or invalid. */
SNLS_API int snls_default_workers(void);

/* Runs a subcommand; file paths written go to stdout, diagnostics to stderr.
   Returns the process exit code (0 on success). */
SNLS_API int snls_run(const char* subcommand, const snls_config* cfg, int workers);

/* ---- noise -------------------------------------------------------------- */

SNLS_API snls_status snls_noise_sample(int num_modes, double intensity, double horizon,
                                       int num_steps, uint64_t seed, uint64_t trajectory,
                                       snls_noise_path** out);
SNLS_API snls_status snls_noise_coarsen(const snls_noise_path* path, int factor,
                                        snls_noise_path** out);
SNLS_API int snls_noise_steps(const snls_noise_path* path);
SNLS_API int snls_noise_modes(const snls_noise_path* path);
SNLS_API snls_status snls_noise_increment(const snls_noise_path* path, int step, int mode,
                                          double* value);
SNLS_API void snls_noise_free(snls_noise_path* path);

/* ---- states and time stepping ------------------------------------------- */

/* sin(pi x) with `resolution` sine modes (spectral) or interior nodes (FD). */
SNLS_API snls_status snls_state_create_sine(snls_scheme scheme, int resolution, snls_state** out);
SNLS_API int snls_state_size(const snls_state* state);
/* Spectral coefficients or nodal values, interleaved re/im, 2*size doubles. */
SNLS_API snls_status snls_state_values(const snls_state* state, double* out, size_t capacity);
SNLS_API snls_status snls_state_observables(const snls_state* state, int focusing_sign,
                                            snls_observables* out);
/* Integrates over the whole path. Solver settings and lambda come from cfg,
   horizon and step count from the path; intensity must be the one the path
   was sampled with. */
SNLS_API snls_status snls_state_advance(snls_state* state, const snls_config* cfg,
                                        const snls_noise_path* path, double intensity);
SNLS_API void snls_state_free(snls_state* state);

/* ---- convergence experiments -------------------------------------------- */

SNLS_API snls_status snls_converge_time(const snls_config* cfg, int workers,
                                        snls_error_table** out);
SNLS_API snls_status snls_converge_space(const snls_config* cfg, int workers,
                                         snls_error_table** out);
SNLS_API size_t snls_table_rows(const snls_error_table* table);
SNLS_API snls_status snls_table_row(const snls_error_table* table, size_t row, double* resolution,
                                    double* error, double* std_error);
SNLS_API double snls_table_fitted_slope(const snls_error_table* table);
SNLS_API int snls_table_failed_trajectories(const snls_error_table* table);
SNLS_API snls_status snls_table_write_csv(const snls_error_table* table, const char* path);
SNLS_API void snls_table_free(snls_error_table* table);

/* Least-squares slope of log(errors) against log(resolutions). */
SNLS_API snls_status snls_fit_order(const double* resolutions, const double* errors, size_t count,
                                    double* slope);

#ifdef __cplusplus
}
#endif

#endif
