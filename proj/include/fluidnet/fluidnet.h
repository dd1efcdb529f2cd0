/*
 * C interface to the fluidnet solver library.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_destroy function. Every fallible call returns a fluidnet_status;
 * the message of the most recent failure on the calling thread is available
 * from fluidnet_last_error().
 */
#ifndef FLUIDNET_H
#define FLUIDNET_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(FLUIDNET_BUILDING)
#define FLUIDNET_API __declspec(dllexport)
#else
#define FLUIDNET_API __declspec(dllimport)
#endif
#else
#define FLUIDNET_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fluidnet_status {
  FLUIDNET_OK = 0,
  FLUIDNET_ERR_INVALID_INPUT = 1,
  FLUIDNET_ERR_CONFIG = 2,
  FLUIDNET_ERR_NUMERICAL = 3,
  FLUIDNET_ERR_IO = 4,
  FLUIDNET_ERR_INTERNAL = 5
} fluidnet_status;

typedef enum fluidnet_baseline {
  FLUIDNET_BASELINE_FA = 0,  /* optimize antenna positions */
  FLUIDNET_BASELINE_FPA = 1  /* antennas fixed on the panel diagonal */
} fluidnet_baseline;

typedef struct fluidnet_config fluidnet_config;
typedef struct fluidnet_run fluidnet_run;
typedef struct fluidnet_experiment fluidnet_experiment;
typedef struct fluidnet_table fluidnet_table;

FLUIDNET_API const char* fluidnet_version(void);
FLUIDNET_API const char* fluidnet_status_string(fluidnet_status status);
FLUIDNET_API const char* fluidnet_last_error(void);

/* ---- configuration ---------------------------------------------------- */

FLUIDNET_API fluidnet_status fluidnet_config_create(fluidnet_config** out);
FLUIDNET_API fluidnet_status fluidnet_config_load(const char* path, fluidnet_config** out);
FLUIDNET_API void fluidnet_config_destroy(fluidnet_config* config);

/* Applies FLUIDNET_<FIELD> environment variables. */
FLUIDNET_API fluidnet_status fluidnet_config_apply_env(fluidnet_config* config);
FLUIDNET_API fluidnet_status fluidnet_config_set(fluidnet_config* config, const char* key,
                                                 const char* value);
FLUIDNET_API fluidnet_status fluidnet_config_get(const fluidnet_config* config,
                                                 const char* key, double* value);
FLUIDNET_API fluidnet_status fluidnet_config_validate(const fluidnet_config* config);
FLUIDNET_API fluidnet_status fluidnet_config_save(const fluidnet_config* config,
                                                  const char* path);

/* ---- single runs ------------------------------------------------------ */

FLUIDNET_API fluidnet_status fluidnet_run_create(const fluidnet_config* config, uint64_t seed,
                                                 fluidnet_baseline baseline, int radmm_trace,
                                                 fluidnet_run** out);
FLUIDNET_API void fluidnet_run_destroy(fluidnet_run* run);

FLUIDNET_API double fluidnet_run_loss(const fluidnet_run* run);
FLUIDNET_API double fluidnet_run_latency(const fluidnet_run* run);
FLUIDNET_API double fluidnet_run_psnr(const fluidnet_run* run);
FLUIDNET_API int fluidnet_run_iterations(const fluidnet_run* run);
FLUIDNET_API int fluidnet_run_converged(const fluidnet_run* run);
FLUIDNET_API size_t fluidnet_run_num_users(const fluidnet_run* run);
/* Copies up to `capacity` digits into `out`; returns the user count. */
FLUIDNET_API size_t fluidnet_run_digits(const fluidnet_run* run, int* out, size_t capacity);

/* Per-iteration BCD trace (CSV). */
FLUIDNET_API fluidnet_status fluidnet_run_write_trace(const fluidnet_run* run, const char* path);
/* Per-iteration RADMM trace (CSV); empty unless radmm_trace was set. */
FLUIDNET_API fluidnet_status fluidnet_run_write_radmm_trace(const fluidnet_run* run,
                                                            const char* path);
/* One LossBreakdown row per BCD call: seed, iteration, per-user fields, loss. */
FLUIDNET_API fluidnet_status fluidnet_run_write_breakdown(const fluidnet_run* run,
                                                          const char* path);
FLUIDNET_API fluidnet_status fluidnet_run_write_state(const fluidnet_run* run, const char* path);
FLUIDNET_API fluidnet_status fluidnet_run_write_scenario(const fluidnet_run* run,
                                                         const char* path);

/* ---- experiments ------------------------------------------------------ */

FLUIDNET_API fluidnet_status fluidnet_experiment_create(const fluidnet_config* config,
                                                        fluidnet_experiment** out);
FLUIDNET_API void fluidnet_experiment_destroy(fluidnet_experiment* experiment);

/* var: "alpha", "M", "SNR", "d_model" or "none". */
FLUIDNET_API fluidnet_status fluidnet_experiment_set_sweep(fluidnet_experiment* experiment,
                                                           const char* var,
                                                           const double* values, size_t count);
FLUIDNET_API fluidnet_status fluidnet_experiment_set_seeds(fluidnet_experiment* experiment,
                                                           const uint64_t* seeds, size_t count);
FLUIDNET_API fluidnet_status fluidnet_experiment_set_modes(fluidnet_experiment* experiment,
                                                           const fluidnet_baseline* modes,
                                                           size_t count);
FLUIDNET_API fluidnet_status fluidnet_experiment_set_threads(fluidnet_experiment* experiment,
                                                             int threads);
FLUIDNET_API fluidnet_status fluidnet_experiment_keep_traces(fluidnet_experiment* experiment,
                                                             int keep);
FLUIDNET_API fluidnet_status fluidnet_experiment_run(const fluidnet_experiment* experiment,
                                                     fluidnet_table** out);

FLUIDNET_API void fluidnet_table_destroy(fluidnet_table* table);
FLUIDNET_API size_t fluidnet_table_num_rows(const fluidnet_table* table);
FLUIDNET_API size_t fluidnet_table_num_failures(const fluidnet_table* table);
/* Mean loss / latency / PSNR for (mode, sweep value); NaN if absent. */
FLUIDNET_API double fluidnet_table_mean_loss(const fluidnet_table* table,
                                             fluidnet_baseline mode, double sweep_value);
FLUIDNET_API double fluidnet_table_mean_latency(const fluidnet_table* table,
                                                fluidnet_baseline mode, double sweep_value);
FLUIDNET_API double fluidnet_table_mean_psnr(const fluidnet_table* table,
                                             fluidnet_baseline mode, double sweep_value);
FLUIDNET_API fluidnet_status fluidnet_table_write_csv(const fluidnet_table* table,
                                                      const char* path);
FLUIDNET_API fluidnet_status fluidnet_table_write_traces(const fluidnet_table* table,
                                                         const char* path);

#ifdef __cplusplus
}
#endif

#endif /* FLUIDNET_H */
