/* Copyright 2026 the decolab developers
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the decolab library.
 *
 * Conventions:
 *
 *  - Complex matrices cross the boundary as row-major interleaved buffers:
 *    entry (i, j) of an m x n matrix lives at buffer[2*(i*n + j)] (real part)
 *    and buffer[2*(i*n + j) + 1] (imaginary part), 2*m*n doubles in total.
 *    Real vectors are plain double arrays.
 *
 *  - Every fallible function returns a decolab_status.  On failure the
 *    thread-local message from decolab_last_error() describes what went
 *    wrong, out-parameters are left unwritten, and no handle is created.
 *
 *  - Handles are opaque and single-owner: release them with the matching
 *    _destroy function, which tolerates NULL.  Handles are not thread-safe
 *    to mutate, but distinct handles may be used from distinct threads.
 *
 *  - Functions documented as returning a plain value (dimensions, flags)
 *    require a valid handle and cannot fail.
 */

#ifndef DECOLAB_DECOLAB_H_
#define DECOLAB_DECOLAB_H_

#include <stdint.h>

#if defined(_WIN32)
#if defined(DECOLAB_BUILDING_LIBRARY)
#define DECOLAB_API __declspec(dllexport)
#else
#define DECOLAB_API __declspec(dllimport)
#endif
#else
#define DECOLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* ------------------------------------------------------------------------- */
/* Status codes and error reporting                                           */
/* ------------------------------------------------------------------------- */

typedef enum decolab_status {
  DECOLAB_OK = 0,
  DECOLAB_INVALID_ARGUMENT = 1,
  DECOLAB_NOT_HERMITIAN = 2,
  DECOLAB_NOT_PSD = 3,
  DECOLAB_DIAGONAL_NOT_UNIT = 4,
  DECOLAB_NOT_NORMALIZED = 5,
  DECOLAB_DIMENSION_MISMATCH = 6,
  DECOLAB_PROJECTORS_NOT_ORTHOGONAL = 7,
  DECOLAB_PROJECTORS_INCOMPLETE = 8,
  DECOLAB_INVALID_PROBABILITY_VECTOR = 9,
  DECOLAB_DECOMPOSITION_MISMATCH = 10,
  DECOLAB_ALLOC_FAILURE = 11,
  DECOLAB_INTERNAL_ERROR = 12
} decolab_status;

/* Message of the most recent failure on the calling thread.  Never NULL;
 * empty before the first failure.  The pointer stays valid until the next
 * failing decolab call on the same thread. */
DECOLAB_API const char* decolab_last_error(void);

/* Stable lowercase identifier for a status code, e.g. "not-psd". */
DECOLAB_API const char* decolab_status_name(decolab_status status);

/* Library version as "major.minor.patch". */
DECOLAB_API const char* decolab_version(void);

/* ------------------------------------------------------------------------- */
/* Channels                                                                   */
/* ------------------------------------------------------------------------- */

typedef struct decolab_channel decolab_channel;

/* Validate a dim x dim correlation matrix (Hermitian, positive semidefinite,
 * unit diagonal; dim >= 2) and wrap it as a decoherence channel. */
DECOLAB_API decolab_status decolab_channel_create(int dim, const double* xi,
                                                  decolab_channel** out);

DECOLAB_API void decolab_channel_destroy(decolab_channel* ch);

DECOLAB_API int decolab_channel_dim(const decolab_channel* ch);

/* Numerical rank of the correlation matrix. */
DECOLAB_API int decolab_channel_rank(const decolab_channel* ch);

/* 1 when every off-diagonal magnitude is below 1 - 1e-10, else 0. */
DECOLAB_API int decolab_channel_is_strict(const decolab_channel* ch);

/* Copy the validated correlation matrix into xi (2*dim*dim doubles). */
DECOLAB_API decolab_status decolab_channel_matrix(const decolab_channel* ch,
                                                  double* xi);

/* out_kl = xi_lk * rho_kl.  rho must be a valid dim x dim density matrix;
 * out takes 2*dim*dim doubles and may alias rho. */
DECOLAB_API decolab_status decolab_channel_apply_schrodinger(
    const decolab_channel* ch, const double* rho, double* out);

/* out_kl = xi_kl * obs_kl for an arbitrary dim x dim matrix obs. */
DECOLAB_API decolab_status decolab_channel_apply_heisenberg(
    const decolab_channel* ch, const double* obs, double* out);

/* n-fold self-composition (entrywise n-th power); n >= 0, n = 0 gives the
 * identity channel. */
DECOLAB_API decolab_status decolab_channel_iterate(const decolab_channel* ch,
                                                   int64_t n,
                                                   decolab_channel** out);

/* Entrywise product of the two correlation matrices; exactly commutative. */
DECOLAB_API decolab_status decolab_channel_compose(const decolab_channel* a,
                                                   const decolab_channel* b,
                                                   decolab_channel** out);

/* Keep the diagonal of rho, zero every off-diagonal entry. */
DECOLAB_API decolab_status decolab_dephase_limit(int dim, const double* rho,
                                                 double* out);

/* Number of canonical Kraus operators (= rank of the correlation matrix). */
DECOLAB_API int decolab_channel_kraus_count(const decolab_channel* ch);

/* Copy canonical Kraus operator `index` (diagonal, dim x dim) into op. */
DECOLAB_API decolab_status decolab_channel_kraus(const decolab_channel* ch,
                                                 int index, double* op);

/* ------------------------------------------------------------------------- */
/* Extremality                                                                */
/* ------------------------------------------------------------------------- */

typedef struct decolab_extremality_report {
  int kraus_rank;
  int gram_rank;
  /* 1 when the channel is an extreme point of the CPTP set. */
  int is_extremal;
  /* 1 when extremality is certified robustly enough to rule out every
   * random-unitary decomposition. */
  int not_random_unitary;
  /* Number of singular values behind the rank decision. */
  int singular_count;
  double tolerance;
} decolab_extremality_report;

/* Linear-independence test on the canonical Kraus products.  tol <= 0 selects
 * the default (1e-10). */
DECOLAB_API decolab_status decolab_channel_extremality(
    const decolab_channel* ch, double tol, decolab_extremality_report* out);

/* Singular values behind the certificate, descending; sv takes
 * `singular_count` doubles as reported by decolab_channel_extremality. */
DECOLAB_API decolab_status decolab_channel_extremality_singular_values(
    const decolab_channel* ch, double tol, double* sv);

/* ------------------------------------------------------------------------- */
/* Random-unitary decompositions                                              */
/* ------------------------------------------------------------------------- */

typedef struct decolab_decomposition decolab_decomposition;

/* Build a decomposition from `terms` weights and phase rows.  phases is
 * terms x dim row-major (plain doubles, radians); each row is re-gauged so
 * its first phase is zero and wrapped into [0, 2 pi).  Weights must be
 * nonnegative; they are pruned below 1e-10, renormalized to sum 1, and
 * sorted descending together with their rows. */
DECOLAB_API decolab_status decolab_decomposition_create(
    int dim, int terms, const double* weights, const double* phases,
    decolab_decomposition** out);

DECOLAB_API void decolab_decomposition_destroy(decolab_decomposition* dec);

DECOLAB_API int decolab_decomposition_terms(const decolab_decomposition* dec);

DECOLAB_API int decolab_decomposition_dim(const decolab_decomposition* dec);

/* Copy the weights (terms doubles). */
DECOLAB_API decolab_status decolab_decomposition_weights(
    const decolab_decomposition* dec, double* weights);

/* Copy the phase rows (terms x dim row-major doubles). */
DECOLAB_API decolab_status decolab_decomposition_phases(
    const decolab_decomposition* dec, double* phases);

/* sum_i p_i |phi_i><phi_i| into xi (2*dim*dim doubles). */
DECOLAB_API decolab_status decolab_decomposition_reconstruct(
    const decolab_decomposition* dec, double* xi);

/* Frobenius norm of xi - reconstruction against the given channel. */
DECOLAB_API decolab_status decolab_decomposition_residual(
    const decolab_decomposition* dec, const decolab_channel* ch, double* out);

/* Shannon entropy H(p) of the weights, in bits. */
DECOLAB_API decolab_status decolab_decomposition_shannon_bits(
    const decolab_decomposition* dec, double* out);

/* 1 when the implied unitaries are mutually orthogonal within tol
 * (tol <= 0 selects the default 1e-8), else 0. */
DECOLAB_API int decolab_decomposition_orthogonal(
    const decolab_decomposition* dec, double tol);

/* Exact two-term decomposition of a qubit channel (dim must be 2). */
DECOLAB_API decolab_status decolab_decompose_qubit(const decolab_channel* ch,
                                                   decolab_decomposition** out);

/* ------------------------------------------------------------------------- */
/* Decomposition search                                                       */
/* ------------------------------------------------------------------------- */

typedef struct decolab_search_config {
  /* Success threshold on the Frobenius residual; <= 0 selects 1e-8. */
  double residual_tol;
  /* Weights below this are pruned; <= 0 selects 1e-10. */
  double min_weight;
  /* Multi-start count; <= 0 selects 64. */
  int starts;
  /* Term budget; <= 0 selects 4 * dim. */
  int max_terms;
  /* Determinism seed; the same seed always yields the same result. */
  uint64_t seed;
} decolab_search_config;

/* Fill cfg with the defaults described above (seed 0). */
DECOLAB_API void decolab_search_config_default(decolab_search_config* cfg);

typedef enum decolab_search_outcome {
  DECOLAB_SEARCH_SUCCESS = 0,
  DECOLAB_SEARCH_NOT_RANDOM_UNITARY = 1,
  DECOLAB_SEARCH_INCONCLUSIVE = 2
} decolab_search_outcome;

typedef struct decolab_search_result decolab_search_result;

/* Search for a random-unitary decomposition.  cfg may be NULL for defaults.
 * The call succeeds whenever the search ran; inspect the outcome on the
 * result handle to learn what it found. */
DECOLAB_API decolab_status decolab_decompose_search(
    const decolab_channel* ch, const decolab_search_config* cfg,
    decolab_search_result** out);

DECOLAB_API void decolab_search_result_destroy(decolab_search_result* res);

DECOLAB_API decolab_search_outcome
decolab_search_result_outcome(const decolab_search_result* res);

/* Frobenius residual of the best reconstruction seen. */
DECOLAB_API double decolab_search_result_residual(
    const decolab_search_result* res);

/* Which stage decided, e.g. "qubit" or "refit(m=3)".  Owned by the handle. */
DECOLAB_API const char* decolab_search_result_detail(
    const decolab_search_result* res);

/* Clone the found decomposition into a fresh handle; fails with
 * DECOLAB_INVALID_ARGUMENT when the outcome carries none. */
DECOLAB_API decolab_status decolab_search_result_decomposition(
    const decolab_search_result* res, decolab_decomposition** out);

/* Copy the extremality certificate; fails with DECOLAB_INVALID_ARGUMENT when
 * the outcome carries none. */
DECOLAB_API decolab_status decolab_search_result_certificate(
    const decolab_search_result* res, decolab_extremality_report* out);

/* ------------------------------------------------------------------------- */
/* Environment dilations                                                      */
/* ------------------------------------------------------------------------- */

typedef struct decolab_dilation decolab_dilation;

/* Canonical model: environment dimension equals the matrix rank. */
DECOLAB_API decolab_status decolab_dilation_create(const decolab_channel* ch,
                                                   decolab_dilation** out);

/* Decomposition-aligned model: one environment dimension per term. */
DECOLAB_API decolab_status decolab_dilation_from_decomposition(
    const decolab_decomposition* dec, decolab_dilation** out);

DECOLAB_API void decolab_dilation_destroy(decolab_dilation* model);

DECOLAB_API int decolab_dilation_sys_dim(const decolab_dilation* model);

DECOLAB_API int decolab_dilation_env_dim(const decolab_dilation* model);

/* Gram matrix of the environment vectors (2*d*d doubles); equals the
 * correlation matrix of the source channel. */
DECOLAB_API decolab_status decolab_dilation_gram(const decolab_dilation* model,
                                                 double* gram);

/* The isometry V, (d*r) x d, into `v` (2*d*r*d doubles). */
DECOLAB_API decolab_status decolab_dilation_isometry(
    const decolab_dilation* model, double* v);

/* Tr_env[V rho V dagger] (2*d*d doubles); equals the channel output. */
DECOLAB_API decolab_status decolab_dilation_apply(const decolab_dilation* model,
                                                  const double* rho,
                                                  double* out);

/* Tr_sys[V rho V dagger], r x r (2*r*r doubles). */
DECOLAB_API decolab_status decolab_dilation_env_state(
    const decolab_dilation* model, const double* rho, double* out);

/* ------------------------------------------------------------------------- */
/* Recovery protocols                                                         */
/* ------------------------------------------------------------------------- */

typedef struct decolab_recovery decolab_recovery;

/* Measure the decomposition-aligned environment, undo the heralded unitary.
 * shots > 0 adds sampled outcome statistics on top of the exact
 * probabilities.  Fails with DECOLAB_DECOMPOSITION_MISMATCH when dec does
 * not reproduce ch within 1e-8. */
DECOLAB_API decolab_status decolab_recover_feedback(
    const decolab_channel* ch, const decolab_decomposition* dec,
    const double* rho, int64_t shots, uint64_t seed, decolab_recovery** out);

/* Best measure-and-correct protocol on the canonical environment.
 * outcomes <= 0 selects the environment dimension; outcomes must otherwise
 * reach it.  Deterministic in (outcomes, restarts, seed) and monotone in
 * restarts at a fixed seed. */
DECOLAB_API decolab_status decolab_recover_optimize(const decolab_channel* ch,
                                                    int outcomes, int restarts,
                                                    uint64_t seed,
                                                    decolab_recovery** out);

/* steps rounds of decohere-measure keeping only the outcome tally, then one
 * combined correction. */
DECOLAB_API decolab_status decolab_recover_iterated(
    const decolab_channel* ch, const decolab_decomposition* dec, int64_t steps,
    const double* rho, uint64_t seed, decolab_recovery** out);

DECOLAB_API void decolab_recovery_destroy(decolab_recovery* rec);

DECOLAB_API int decolab_recovery_outcomes(const decolab_recovery* rec);

/* Length of each measurement outcome vector (the environment dimension). */
DECOLAB_API int decolab_recovery_measurement_dim(const decolab_recovery* rec);

DECOLAB_API double decolab_recovery_worst_fidelity(const decolab_recovery* rec);

DECOLAB_API double decolab_recovery_average_fidelity(
    const decolab_recovery* rec);

/* Shannon entropy of the outcome distribution, in bits. */
DECOLAB_API double decolab_recovery_info_bits(const decolab_recovery* rec);

/* Max-norm deviation of sum_m |mu_m><mu_m| from the identity. */
DECOLAB_API double decolab_recovery_resolution_defect(
    const decolab_recovery* rec);

/* Copy the exact outcome probabilities (`outcomes` doubles). */
DECOLAB_API decolab_status decolab_recovery_probabilities(
    const decolab_recovery* rec, double* p);

/* Copy the sampled outcome tally (`outcomes` entries); fails with
 * DECOLAB_INVALID_ARGUMENT when the report carries no samples. */
DECOLAB_API decolab_status decolab_recovery_counts(const decolab_recovery* rec,
                                                   int64_t* counts);

/* Copy the sampled outcome frequencies (`outcomes` doubles); fails with
 * DECOLAB_INVALID_ARGUMENT when the report carries no samples. */
DECOLAB_API decolab_status decolab_recovery_frequencies(
    const decolab_recovery* rec, double* f);

/* Copy measurement vector `index` (2 * measurement_dim doubles). */
DECOLAB_API decolab_status decolab_recovery_measurement_vector(
    const decolab_recovery* rec, int index, double* mu);

/* Copy the correction unitary applied after outcome `index`
 * (2*d*d doubles, d the system dimension). */
DECOLAB_API decolab_status decolab_recovery_correction(
    const decolab_recovery* rec, int index, double* u);

/* ------------------------------------------------------------------------- */
/* Entropy accounting                                                         */
/* ------------------------------------------------------------------------- */

/* Entropy exchange S(sqrt(diag rho) xi sqrt(diag rho)) in bits. */
DECOLAB_API decolab_status decolab_entropy_exchange(const decolab_channel* ch,
                                                    const double* rho,
                                                    double* out);

/* The same quantity through a decomposition: the entropy of
 * W_ij = sqrt(p_i p_j) Tr[U_i rho U_j dagger]. */
DECOLAB_API decolab_status decolab_entropy_exchange_ru(
    const decolab_decomposition* dec, const double* rho, double* out);

typedef struct decolab_info_report {
  double s_ex;
  double entropy_production;
  /* 1 when a decomposition was supplied and the record fields are set. */
  int has_record;
  double h_p;
  double bound_gap;
} decolab_info_report;

/* Entropy bookkeeping for one (channel, state) pair; dec may be NULL.
 * Fails with DECOLAB_DECOMPOSITION_MISMATCH when dec does not reproduce ch
 * within 1e-8. */
DECOLAB_API decolab_status decolab_check_bounds(
    const decolab_channel* ch, const double* rho,
    const decolab_decomposition* dec, decolab_info_report* out);

/* Decohered classically correlated pair for a probability vector p of length
 * dim.  joint (2*d^2*d^2 doubles) may be NULL when only the mutual
 * information numbers are wanted. */
DECOLAB_API decolab_status decolab_reference_frame(const decolab_channel* ch,
                                                   const double* p,
                                                   double* joint,
                                                   double* info_before_bits,
                                                   double* info_after_bits);

/* ------------------------------------------------------------------------- */
/* Plain-state utilities                                                      */
/* ------------------------------------------------------------------------- */

/* Check that rho is a dim x dim density matrix (Hermitian, PSD, unit
 * trace). */
DECOLAB_API decolab_status decolab_state_validate(int dim, const double* rho);

/* Von Neumann entropy of a density matrix, in bits. */
DECOLAB_API decolab_status decolab_von_neumann_entropy(int dim,
                                                       const double* rho,
                                                       double* out);

/* Shannon entropy of a probability vector, in bits. */
DECOLAB_API decolab_status decolab_shannon_entropy(int n, const double* p,
                                                   double* out);

/* Uhlmann fidelity between two density matrices. */
DECOLAB_API decolab_status decolab_state_fidelity(int dim, const double* a,
                                                  const double* b, double* out);

/* Named correlation matrices used throughout the documentation and tests:
 * "extremal-rank2-d4" (dim 4) and "strict-gap-qutrit" (dim 3).  Two-call
 * pattern: with xi NULL the dimension is written to *dim; with xi non-NULL,
 * *dim must hold the dimension and the matrix is copied out. */
DECOLAB_API decolab_status decolab_reference_matrix(const char* name, int* dim,
                                                    double* xi);

/* ------------------------------------------------------------------------- */
/* Reference criteria suite                                                   */
/* ------------------------------------------------------------------------- */

typedef struct decolab_suite_result decolab_suite_result;

/* Run the eight built-in verification criteria under the given seed. */
DECOLAB_API decolab_status decolab_suite_run(uint64_t seed,
                                             decolab_suite_result** out);

DECOLAB_API void decolab_suite_result_destroy(decolab_suite_result* res);

DECOLAB_API int decolab_suite_count(const decolab_suite_result* res);

/* Accessors for criterion `index`; strings are owned by the handle. */
DECOLAB_API const char* decolab_suite_id(const decolab_suite_result* res,
                                         int index);
DECOLAB_API const char* decolab_suite_name(const decolab_suite_result* res,
                                           int index);
DECOLAB_API int decolab_suite_passed(const decolab_suite_result* res,
                                     int index);
DECOLAB_API const char* decolab_suite_details(const decolab_suite_result* res,
                                              int index);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* DECOLAB_DECOLAB_H_ */
