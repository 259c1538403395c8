/* C interface to the mbgdt robust-regression library.
 *
 * Objects are opaque handles created by *_create / producer functions and
 * released with the matching *_destroy. Every fallible call returns an
 * mbgdt_status; on failure the message is available from mbgdt_last_error()
 * on the same thread until the next failing call.
 */
#ifndef MBGDT_MBGDT_H_
#define MBGDT_MBGDT_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(MBGDT_BUILDING_LIBRARY)
#    define MBGDT_API __declspec(dllexport)
#  else
#    define MBGDT_API __declspec(dllimport)
#  endif
#else
#  define MBGDT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values double as CLI exit codes. */
typedef enum mbgdt_status {
  MBGDT_OK = 0,
  MBGDT_ERR_INVALID_ARGUMENT = 1, /* null handle, bad index, precondition */
  MBGDT_ERR_CONFIG = 2,           /* unknown key, unparsable value */
  MBGDT_ERR_DIVERGED = 3,         /* numerical divergence during a fit */
  MBGDT_ERR_IO = 4,               /* unreadable/unwritable file, malformed CSV */
  MBGDT_ERR_INTERNAL = 5
} mbgdt_status;

typedef struct mbgdt_config mbgdt_config;
typedef struct mbgdt_dataset mbgdt_dataset;
typedef struct mbgdt_fit mbgdt_fit;
typedef struct mbgdt_sweep mbgdt_sweep;
typedef struct mbgdt_report mbgdt_report;

MBGDT_API const char* mbgdt_last_error(void);
MBGDT_API const char* mbgdt_version(void);

/* ---- configuration ---------------------------------------------------- */

/* A configuration holding the shipped defaults. */
MBGDT_API mbgdt_status mbgdt_config_create(mbgdt_config** out);
MBGDT_API void mbgdt_config_destroy(mbgdt_config* config);
MBGDT_API mbgdt_status mbgdt_config_load(mbgdt_config* config, const char* path);
MBGDT_API mbgdt_status mbgdt_config_set(mbgdt_config* config, const char* key, const char* value);
/* "key=value" */
MBGDT_API mbgdt_status mbgdt_config_set_assignment(mbgdt_config* config, const char* assignment);
/* Copies the value (NUL-terminated) into buf when it fits; *needed receives
 * the required size including the terminator. */
MBGDT_API mbgdt_status mbgdt_config_get(const mbgdt_config* config, const char* key, char* buf,
                                        size_t cap, size_t* needed);
/* Checks that every value parses and is in range. */
MBGDT_API mbgdt_status mbgdt_config_validate(const mbgdt_config* config);

/* ---- datasets --------------------------------------------------------- */

/* Training and test data for trial seed `seed` of the configured scenario. */
MBGDT_API mbgdt_status mbgdt_generate(const mbgdt_config* config, mbgdt_dataset** train,
                                      mbgdt_dataset** test);
MBGDT_API mbgdt_status mbgdt_dataset_create(const double* x, const double* y, size_t n,
                                            mbgdt_dataset** out);
MBGDT_API mbgdt_status mbgdt_dataset_read_csv(const char* path, mbgdt_dataset** out);
/* The config (may be NULL) is echoed as comment lines. */
MBGDT_API mbgdt_status mbgdt_dataset_write_csv(const mbgdt_dataset* dataset,
                                               const mbgdt_config* config, const char* path);
MBGDT_API size_t mbgdt_dataset_size(const mbgdt_dataset* dataset);
MBGDT_API mbgdt_status mbgdt_dataset_get(const mbgdt_dataset* dataset, size_t index, double* x,
                                         double* y, int* is_contaminated);
MBGDT_API void mbgdt_dataset_destroy(mbgdt_dataset* dataset);

/* ---- fitting ---------------------------------------------------------- */

/* Fits the configured trimmed model (naive when trim_fraction=0 and
 * loss=squared). */
MBGDT_API mbgdt_status mbgdt_fit_dataset(const mbgdt_config* config, const mbgdt_dataset* train,
                                         mbgdt_fit** out);
MBGDT_API size_t mbgdt_fit_coeff_count(const mbgdt_fit* fit);
MBGDT_API mbgdt_status mbgdt_fit_coeffs(const mbgdt_fit* fit, double* out, size_t cap);
MBGDT_API size_t mbgdt_fit_iterations(const mbgdt_fit* fit);
MBGDT_API int mbgdt_fit_converged(const mbgdt_fit* fit);
/* Prediction at an unscaled x. */
MBGDT_API mbgdt_status mbgdt_fit_predict(const mbgdt_fit* fit, double x, double* out);
MBGDT_API mbgdt_status mbgdt_fit_mse(const mbgdt_fit* fit, const mbgdt_dataset* test, double* out);
MBGDT_API void mbgdt_fit_destroy(mbgdt_fit* fit);

/* ---- commands (file outputs) ------------------------------------------ */

/* <out_dir>/train.csv and <out_dir>/test.csv */
MBGDT_API mbgdt_status mbgdt_cmd_generate(const mbgdt_config* config, const char* out_dir);
/* <out_dir>/weights.txt and <out_dir>/trace.csv; train_path may be NULL to
 * generate the training data from the config. */
MBGDT_API mbgdt_status mbgdt_cmd_fit(const mbgdt_config* config, const char* train_path,
                                     const char* out_dir);
/* param: "epsilon", "distance-x" or "distance-y". threads <= 1 runs
 * sequentially. */
MBGDT_API mbgdt_status mbgdt_cmd_sweep(const mbgdt_config* config, const char* param,
                                       const double* grid, size_t grid_len, const char* out_path,
                                       unsigned threads, mbgdt_sweep** out);
MBGDT_API size_t mbgdt_sweep_row_count(const mbgdt_sweep* sweep);
/* Any output pointer may be NULL. */
MBGDT_API mbgdt_status mbgdt_sweep_row(const mbgdt_sweep* sweep, size_t row, double* value,
                                       double* mse_naive_mean, double* mse_trimmed_mean,
                                       size_t* trials, size_t* errors);
MBGDT_API void mbgdt_sweep_destroy(mbgdt_sweep* sweep);

/* Receives each finished experiment's name and wall time in seconds. */
typedef void (*mbgdt_progress_fn)(const char* name, double seconds, void* user);

/* Runs the shipped experiment set and writes it under out_dir. Returns
 * MBGDT_ERR_DIVERGED (with the report still produced) when an experiment
 * failed in every trial. `progress` and `out` may be NULL. */
MBGDT_API mbgdt_status mbgdt_cmd_reproduce(const mbgdt_config* config, const char* out_dir,
                                           unsigned threads, mbgdt_progress_fn progress,
                                           void* user, mbgdt_report** out);
MBGDT_API size_t mbgdt_report_summary_count(const mbgdt_report* report);
MBGDT_API mbgdt_status mbgdt_report_summary_row(const mbgdt_report* report, size_t row,
                                                const char** experiment, double* mse_naive_mean,
                                                double* mse_trimmed_mean, double* ratio);
MBGDT_API void mbgdt_report_destroy(mbgdt_report* report);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* MBGDT_MBGDT_H_ */
