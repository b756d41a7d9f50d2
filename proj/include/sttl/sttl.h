#ifndef STTL_C_API_H
#define STTL_C_API_H

/* C interface to the tube synthesis and control toolkit. All functions
 * return sttl_status; results travel through opaque handles that must be
 * released with the matching _free call. Error text for the most recent
 * failing call on the current thread is available via sttl_last_error().
 */

#include <stddef.h>
#include <stdint.h>

#if defined _WIN32 || defined __CYGWIN__
#define STTL_API __declspec(dllexport)
#else
#define STTL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sttl_status {
  STTL_OK = 0,        /* success / certificate valid */
  STTL_REJECTED = 1,  /* ran to completion but no valid certificate / verdict negative */
  STTL_INVALID = 2,   /* bad input or failed validation */
  STTL_INTEGRITY = 3, /* artifact disagrees with recomputation */
  STTL_ERROR = 4      /* internal failure */
} sttl_status;

typedef struct sttl_task sttl_task;
typedef struct sttl_tube sttl_tube;
typedef struct sttl_runs sttl_runs;

STTL_API const char* sttl_last_error(void);
STTL_API const char* sttl_version(void);

/* ---- tasks ---- */
STTL_API sttl_status sttl_task_load(const char* path, sttl_task** out);
STTL_API void sttl_task_free(sttl_task* task);
STTL_API const char* sttl_task_name(const sttl_task* task);
STTL_API size_t sttl_task_dim(const sttl_task* task);
STTL_API double sttl_task_horizon(const sttl_task* task);

/* Overrides applied before running (mirror the CLI flags). */
STTL_API sttl_status sttl_task_set_seed(sttl_task* task, uint64_t seed);
STTL_API sttl_status sttl_task_set_epsilon(sttl_task* task, double epsilon);
STTL_API sttl_status sttl_task_set_sim_step(sttl_task* task, double step);
STTL_API sttl_status sttl_task_disable_slope_cap(sttl_task* task);

/* ---- synthesis ---- */
/* Writes <name>.tube.json and <name>.synthesis.json under out_dir (pass NULL
 * or "" to keep everything in memory). STTL_OK iff the certificate is valid;
 * STTL_REJECTED when synthesis finished without one (out still set when a
 * tube document exists). */
STTL_API sttl_status sttl_synthesize(const sttl_task* task, const char* out_dir, sttl_tube** out);

/* ---- tube documents ---- */
STTL_API sttl_status sttl_tube_load(const char* path, sttl_tube** out);
STTL_API sttl_status sttl_tube_save(const sttl_tube* tube, const char* path);
STTL_API void sttl_tube_free(sttl_tube* tube);
STTL_API double sttl_tube_eta_star(const sttl_tube* tube);
STTL_API double sttl_tube_lipschitz(const sttl_tube* tube);
STTL_API double sttl_tube_epsilon(const sttl_tube* tube);
STTL_API double sttl_tube_slack(const sttl_tube* tube);
STTL_API int sttl_tube_valid(const sttl_tube* tube);
STTL_API size_t sttl_tube_dim(const sttl_tube* tube);
/* Boundary evaluation; side 0 = lower, 1 = upper. */
STTL_API sttl_status sttl_tube_boundary(const sttl_tube* tube, size_t dim_index, int side,
                                        double t, double* out);

/* Independent certificate recheck of a stored tube document.
 * STTL_OK valid, STTL_REJECTED recomputed-invalid, STTL_INTEGRITY mismatch. */
STTL_API sttl_status sttl_verify(const char* tube_path, double* slack_out);

/* ---- simulation ---- */
/* Runs every seed configured in the task; writes per-seed CSVs and a combined
 * run report under out_dir when given. STTL_OK iff every run stayed inside
 * the tube with positive robustness. */
STTL_API sttl_status sttl_simulate(const sttl_task* task, const sttl_tube* tube,
                                   const char* out_dir, sttl_runs** out);
STTL_API void sttl_runs_free(sttl_runs* runs);
STTL_API size_t sttl_runs_count(const sttl_runs* runs);
STTL_API int sttl_runs_contained(const sttl_runs* runs, size_t run_index);
STTL_API double sttl_runs_rho(const sttl_runs* runs, size_t run_index);
STTL_API uint64_t sttl_runs_clamp_count(const sttl_runs* runs, size_t run_index);
STTL_API double sttl_runs_min_margin(const sttl_runs* runs, size_t run_index);

/* ---- monitoring ---- */
/* formula may be NULL/"" to monitor the task's own formula. STTL_OK when the
 * trajectory satisfies the formula (rho > 0), STTL_REJECTED otherwise. */
STTL_API sttl_status sttl_monitor(const sttl_task* task, const char* formula,
                                  const char* csv_path, double* rho_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* STTL_C_API_H */
