/* chanest — MIMO pilot-based channel-estimation simulator.
 *
 * C API of the shared library. All state lives behind the opaque
 * chanest_experiment handle; every call reports success through a status
 * code, and the last failure message is retained on the handle.
 *
 * A handle starts out with the default experiment: an 8x8 antenna setup with
 * 8-symbol orthogonal BPSK pilots, SNR grid 5..25 dB, methods
 * ls,mmse,pso,hybrid, 12 runs, and the stock swarm parameters (population 64,
 * inertia 0.9 -> 0.4, C1 = C2 = 2, 10 iterations, tolerance 1e-2, 5%
 * mutation / 5% reproduction, mutation variance 0.02). Fields are changed
 * with chanest_experiment_set; see the key list below.
 */
#ifndef CHANEST_H
#define CHANEST_H

#include <stdint.h>

#if defined(_WIN32)
#define CHANEST_API __declspec(dllexport)
#else
#define CHANEST_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum chanest_status {
  CHANEST_OK = 0,
  /* Null handle or output pointer. */
  CHANEST_ERR_ARGUMENT = 1,
  /* Unknown key, bad value, or invalid cross-field configuration; the
   * message names the offending field. */
  CHANEST_ERR_CONFIG = 2,
  /* Numerical or I/O failure while running. */
  CHANEST_ERR_RUNTIME = 3
} chanest_status;

typedef struct chanest_experiment chanest_experiment;

CHANEST_API const char *chanest_version(void);

/* Returns NULL only on allocation failure. */
CHANEST_API chanest_experiment *chanest_experiment_new(void);
CHANEST_API void chanest_experiment_free(chanest_experiment *exp);

/* Sets one configuration entry. Keys:
 *   num_rx, num_tx, pilot_len               scenario dimensions
 *   snr_grid                                comma list of dB values ("inf" = noiseless)
 *   methods                                 comma list from ls,mmse,pso,hybrid
 *   runs, seed, threads                     Monte Carlo shape (threads 0 = auto)
 *   population, inertia_start, inertia_end, accel_personal, accel_social,
 *   max_iter, tolerance                     swarm parameters ("inf" tolerance
 *                                           disables convergence detection)
 *   mutate_frac, reproduce_frac, mutation_var   hybrid parameters
 *   fitness_floor                           objective denominator floor
 *   swarm_spread                            initial scatter std; "auto" = LS
 *                                           error scale sqrt(noise_var/pilot_len)
 *   stop_rule                               "stall" or "threshold"
 *   velocity_clamp                          per-dimension |v| cap; 0 = off
 */
CHANEST_API chanest_status chanest_experiment_set(chanest_experiment *exp,
                                                  const char *key,
                                                  const char *value);

/* Message of the most recent failure on this handle; never NULL. The string
 * stays valid until the next call on the handle. */
CHANEST_API const char *chanest_last_error(const chanest_experiment *exp);

/* SNR-vs-NMSE sweep over snr_grid x methods x runs. Writes sweep_raw.csv and
 * sweep_summary.csv into out_dir (created if missing). */
CHANEST_API chanest_status chanest_run_sweep(chanest_experiment *exp,
                                             const char *out_dir);

/* Paired iterations-to-convergence study of pso vs hybrid over the grid.
 * Writes convergence.csv and convergence_summary.csv. */
CHANEST_API chanest_status chanest_run_convergence(chanest_experiment *exp,
                                                   const char *out_dir);

/* Runs pso and hybrid once on one shared problem instance at snr_db with
 * per-iteration logging, projecting particles onto dimensions dim_a/dim_b of
 * the real-vectorized channel. Writes trajectory.csv and dispersion.csv. */
CHANEST_API chanest_status chanest_run_trajectory(chanest_experiment *exp,
                                                  double snr_db, int dim_a,
                                                  int dim_b,
                                                  const char *out_dir);

/* Evaluates one Monte Carlo run of `method` at snr_db, exactly as the sweep
 * would (snr_db is matched against the configured grid to derive the run's
 * random streams; values not on the grid behave like grid index 0).
 * Outputs: *nmse_out; *iterations_out and *converged_out are -1 for methods
 * without an optimizer. Output pointers may be NULL if unwanted. */
CHANEST_API chanest_status chanest_run_single(chanest_experiment *exp,
                                              double snr_db,
                                              const char *method,
                                              uint64_t run_index,
                                              double *nmse_out,
                                              int *iterations_out,
                                              int *converged_out);

#ifdef __cplusplus
}
#endif

#endif /* CHANEST_H */
