/* nlsim - few-qubit simulation of nonlocal spin-product generalized
 * measurements.
 *
 * C API over the C++ core: opaque handles plus status codes. All functions
 * are thread-safe (no hidden global state); handles must not be shared
 * between threads without external synchronization.
 *
 * Conventions
 * -----------
 * - Angles are radians. Meter angles live in [0, pi/4], meter phases in
 *   [0, pi]; the Bell-meter scheme accepts any rotation angles.
 * - Complex arrays are interleaved doubles (re0, im0, re1, im1, ...).
 * - Two-qubit states are 4 amplitudes = 8 doubles, basis order
 *   |00>, |01>, |10>, |11> with the first (Alice's) qubit most significant.
 * - Two-qubit density matrices are 4x4 row-major = 32 interleaved doubles.
 * - Outcome probabilities reported for a run are conditional on the scheme
 *   succeeding; the overall success probability is reported separately.
 */

#ifndef NLSIM_H
#define NLSIM_H

#include <stdint.h>

#if defined(_WIN32)
#define NLSIM_API __declspec(dllexport)
#else
#define NLSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nlsim_status {
  NLSIM_OK = 0,
  NLSIM_ERR_INVALID_ARGUMENT = 1,
  NLSIM_ERR_DIMENSION = 2,
  NLSIM_ERR_NORMALIZATION = 3,
  NLSIM_ERR_IMPOSSIBLE_POSTSELECTION = 4,
  NLSIM_ERR_SHAPE = 5,
  NLSIM_ERR_INCONSISTENT = 6,
  NLSIM_ERR_INTERNAL = 7
} nlsim_status;

NLSIM_API const char* nlsim_version(void);
NLSIM_API const char* nlsim_status_name(nlsim_status status);

/* ---- meter states ------------------------------------------------------ */

/* Writes the 2-qubit meter state for (theta, phi) into amps[8]. */
NLSIM_API nlsim_status nlsim_prepare_meter(double theta, double phi,
                                           double* amps);

/* Probabilistic meter preparation from a Bell pair via a local filter.
 * Writes the success probability (exactly 1/2) and the meter state. */
NLSIM_API nlsim_status nlsim_prepare_meter_filtered(double theta,
                                                    double* success_probability,
                                                    double* amps);

/* Meter concurrence, computed from the state (not the closed form). */
NLSIM_API nlsim_status nlsim_meter_concurrence(double theta, double phi,
                                               double* concurrence);

/* ---- scheme runs ------------------------------------------------------- */

typedef struct nlsim_run nlsim_run;

/* psi: 2-qubit system state, 8 interleaved doubles, normalized. */
NLSIM_API nlsim_status nlsim_run_nmem(double theta, double phi,
                                      const double* psi, nlsim_run** out);
NLSIM_API nlsim_status nlsim_run_mem(double theta1, double theta2,
                                     const double* psi, nlsim_run** out);
NLSIM_API nlsim_status nlsim_run_erasure(double theta, const double* psi,
                                         nlsim_run** out);
NLSIM_API void nlsim_run_free(nlsim_run* run);

NLSIM_API const char* nlsim_run_scheme(const nlsim_run* run);
NLSIM_API double nlsim_run_success_probability(const nlsim_run* run);
/* Probability-weighted purity loss of the coarse-grained branches. */
NLSIM_API double nlsim_run_delta_gamma(const nlsim_run* run);

/* Number of post-selection stages (0 for deterministic schemes). */
NLSIM_API int nlsim_run_postselection_count(const nlsim_run* run);
NLSIM_API nlsim_status nlsim_run_postselection(const nlsim_run* run, int index,
                                               const char** name,
                                               double* probability);

/* Local-outcome branches. label must hold >= 8 bytes; rho may be NULL or
 * 32 doubles (zeroed for impossible branches). */
NLSIM_API int nlsim_run_branch_count(const nlsim_run* run);
NLSIM_API nlsim_status nlsim_run_branch(const nlsim_run* run, int index,
                                        char* label, double* probability,
                                        double* rho);

/* Coarse-grained branch for global outcome +1 or -1. purity and rho are
 * zeroed for impossible branches; rho may be NULL. */
NLSIM_API nlsim_status nlsim_run_global(const nlsim_run* run, int outcome,
                                        double* probability, double* purity,
                                        double* rho);

/* ---- closed-form relations and sweeps ---------------------------------- */

/* Strength/concurrence law at one meter angle: concurrence of the ideal
 * meter and the strength of the simulation-derived POVM. Fails with
 * NLSIM_ERR_INCONSISTENT if the two disagree beyond 1e-10. */
NLSIM_API nlsim_status nlsim_strength_concurrence(double theta,
                                                  double* concurrence,
                                                  double* strength);

/* Meter phase realizing strength s at concurrence c (requires c >= s). */
NLSIM_API nlsim_status nlsim_phi_for(double concurrence, double strength,
                                     double* phi);

/* Closed-form purity degradation at (strength, phi). */
NLSIM_API double nlsim_delta_gamma(double strength, double phi);

typedef struct nlsim_sweep nlsim_sweep;

/* Noise surface over a grid_c x grid_s grid of (concurrence, strength),
 * row-major with concurrence varying slowest. Resolutions must be >= 2. */
NLSIM_API nlsim_status nlsim_noise_surface(int grid_c, int grid_s,
                                           nlsim_sweep** out);
NLSIM_API int nlsim_sweep_row_count(const nlsim_sweep* sweep);
/* phi and delta_gamma are zeroed for infeasible rows. */
NLSIM_API nlsim_status nlsim_sweep_row(const nlsim_sweep* sweep, int index,
                                       double* concurrence, double* strength,
                                       double* phi, double* delta_gamma,
                                       int* feasible);
NLSIM_API void nlsim_sweep_free(nlsim_sweep* sweep);

/* ---- verification ------------------------------------------------------ */

typedef struct nlsim_report nlsim_report;

/* Runs every verification suite. tolerance_override <= 0 keeps the
 * per-suite defaults. */
NLSIM_API nlsim_status nlsim_verify(uint64_t seed, double tolerance_override,
                                    nlsim_report** out);
NLSIM_API int nlsim_report_count(const nlsim_report* report);
NLSIM_API nlsim_status nlsim_report_entry(const nlsim_report* report, int index,
                                          const char** name, double* residual,
                                          double* tolerance, int* passed);
NLSIM_API int nlsim_report_all_passed(const nlsim_report* report);
NLSIM_API void nlsim_report_free(nlsim_report* report);

#ifdef __cplusplus
}
#endif

#endif /* NLSIM_H */
