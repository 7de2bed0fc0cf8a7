/* dfsim.h
 *
 * C interface to the dfsim shared library: decoherence-free-subspace
 * construction and certification, single-particle-loss recovery checks, the
 * loss-tolerant photonic measurement and the trine-state key-distribution
 * Monte Carlo.
 *
 * All functions return a dfsim_status; out-parameters are written only on
 * DFSIM_OK. Strings and state handles returned by the library must be
 * released with dfsim_string_free / dfsim_state_free.
 */

#ifndef DFSIM_H
#define DFSIM_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dfsim_status {
    DFSIM_OK = 0,
    DFSIM_ERR_INVALID_ARGUMENT = 1,
    DFSIM_ERR_DIMENSION_MISMATCH = 2,
    DFSIM_ERR_NOT_IN_DFS = 3,
    DFSIM_ERR_NUMERICAL = 4,
    DFSIM_ERR_INTERNAL = 5
} dfsim_status;

const char* dfsim_status_name(dfsim_status status);

/* Message for the most recent failure on the calling thread. */
const char* dfsim_last_error(void);

/* ---- opaque pure-state handles ---- */

typedef struct dfsim_state dfsim_state;

void dfsim_state_free(dfsim_state* state);
int dfsim_state_local_dim(const dfsim_state* state);
int dfsim_state_num_sites(const dfsim_state* state);
int64_t dfsim_state_dim(const dfsim_state* state);

/* Copies the amplitudes into caller-owned arrays of length dim. */
dfsim_status dfsim_state_amplitudes(const dfsim_state* state, double* re, double* im,
                                    int64_t len);

/* Computational basis state |index> of n qudits with local dimension d. */
dfsim_status dfsim_state_basis(int local_dim, int num_sites, int64_t index,
                               dfsim_state** out);

/* Normalized product of two-qubit singlets; pairs holds 2*num_pairs 1-based
 * site indices (a1, b1, a2, b2, ...). */
dfsim_status dfsim_state_singlet_product(const int* pairs, int num_pairs,
                                         dfsim_state** out);

/* The four-qubit trine state k = 1..3 and its DFS-orthogonal complement. */
dfsim_status dfsim_state_trine(int k, dfsim_state** out);
dfsim_status dfsim_state_trine_complement(int k, dfsim_state** out);

/* Member `index` of the deterministic DFS basis for (n, d); *count receives
 * the basis dimension. Either out-parameter may be NULL. */
dfsim_status dfsim_state_dfs_basis(int num_sites, int local_dim, int index,
                                   dfsim_state** out, int* count);

/* Normalized alpha * a + beta * b. */
dfsim_status dfsim_state_superpose(const dfsim_state* a, double alpha_re, double alpha_im,
                                   const dfsim_state* b, double beta_re, double beta_im,
                                   dfsim_state** out);

dfsim_status dfsim_overlap(const dfsim_state* a, const dfsim_state* b, double* re,
                           double* im);

/* ---- verification primitives ---- */

/* Multiplicity of the spin-j sector of n qubits; j passed as 2j. */
dfsim_status dfsim_multiplicity(int n, int twice_j, int64_t* out);

/* Max over Haar-random SU(d) draws of ||U^(x)n psi - psi||. */
dfsim_status dfsim_verify_invariance(const dfsim_state* state, int trials, uint64_t seed,
                                     double tol, double* max_deviation, int* pass);

/* ---- report-level entry points (JSON out-strings) ---- */

/* Multiplicity table for n qubits; pass twice_j = -1 for the full table. */
dfsim_status dfsim_multiplicity_report(int n, int twice_j, char** out_json);

/* suite: invariance | branch | recovery | two-loss | photonic | all. */
dfsim_status dfsim_run_verify_suite(const char* suite, int n, int d, int trials,
                                    uint64_t seed, double tol, char** out_json,
                                    int* pass);

/* The detection table of the loss-tolerant photonic measurement. */
dfsim_status dfsim_photonic_table(char** out_json);

/* Trine-state QKD Monte Carlo; backend: dfs | fock. out_csv (optional, may be
 * NULL) receives the exclusion table as CSV. */
dfsim_status dfsim_run_qkd(int64_t rounds, double loss_probability, int collective_noise,
                           const char* backend, uint64_t seed, int threads,
                           char** out_json, char** out_csv);

void dfsim_string_free(char* str);

#ifdef __cplusplus
}
#endif

#endif /* DFSIM_H */
