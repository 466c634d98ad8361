/*
 * tracelab C API.
 *
 * Opaque matrix handles plus plain-struct reports. Every function that can
 * fail returns a tl_status; on failure tl_last_error() describes the cause
 * (thread-local, valid until the next failing call on the same thread).
 */
#ifndef TRACELAB_H
#define TRACELAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define TL_API __declspec(dllexport)
#else
#define TL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tl_status {
  TL_OK = 0,
  TL_ERR_DIMENSION_MISMATCH = 1,
  TL_ERR_NON_REAL_TRACE = 2,
  TL_ERR_CONVERGENCE_FAILURE = 3,
  TL_ERR_DOMAIN = 4,
  TL_ERR_INVALID_EXPONENT = 5,
  TL_ERR_INVALID_PARAMETER = 6,
  TL_ERR_INVALID_ARGUMENT = 7,
  TL_ERR_NOT_HERMITIAN = 8,
  TL_ERR_NOT_PSD = 9,
  TL_ERR_PARSE = 10,
  TL_ERR_IO = 11,
  TL_ERR_NULL_ARGUMENT = 100,
  TL_ERR_BUFFER_TOO_SMALL = 101,
  TL_ERR_INTERNAL = 102
} tl_status;

typedef enum tl_matrix_kind { TL_KIND_HERMITIAN = 0, TL_KIND_PSD = 1 } tl_matrix_kind;

typedef enum tl_direction {
  TL_LHS_LEQ_RHS = 0,
  TL_LHS_GEQ_RHS = 1,
  TL_EQUAL = 2
} tl_direction;

typedef struct tl_matrix tl_matrix;

TL_API const char* tl_version(void);
TL_API const char* tl_last_error(void);
TL_API const char* tl_status_name(tl_status status);

/* ---- matrices ---------------------------------------------------------- */

/* entries: 2*n*n doubles, row-major, interleaved (re, im). */
TL_API tl_status tl_matrix_create(size_t n, const double* entries, tl_matrix_kind kind,
                                  tl_matrix** out);
TL_API tl_status tl_matrix_load(const char* path, tl_matrix** out);
TL_API tl_status tl_matrix_save(const tl_matrix* m, const char* path);
/* kind: "GinibrePsd", "DiagonalPsd", "RankDeficientPsd" or "HermitianGue". */
TL_API tl_status tl_matrix_generate(const char* kind, size_t n, size_t rank, double scale,
                                    uint64_t seed, tl_matrix** out);
/* Operand pair exactly as one sweep trial draws it (kind may also be "CommutingPsdPair"). */
TL_API tl_status tl_generate_pair(const char* kind, size_t n, uint64_t seed, tl_matrix** a,
                                  tl_matrix** b);
TL_API void tl_matrix_free(tl_matrix* m);
TL_API size_t tl_matrix_dim(const tl_matrix* m);
TL_API tl_matrix_kind tl_matrix_get_kind(const tl_matrix* m);
/* out: 2*n*n doubles. */
TL_API tl_status tl_matrix_entries(const tl_matrix* m, double* out, size_t len);
/* out: n doubles, decreasing. */
TL_API tl_status tl_matrix_spectrum(const tl_matrix* m, double* out, size_t len);

/* ---- checks ------------------------------------------------------------ */

/* Slack >= -tol_used means the expected direction holds. */
typedef struct tl_side_pair {
  double lhs;
  double rhs;
  double slack;
  double p_or_nu;
  double tol_used;
  tl_direction direction;
  int holds;
} tl_side_pair;

#define TL_MAX_CHAIN_TERMS 8

typedef struct tl_chain {
  size_t count;
  double terms[TL_MAX_CHAIN_TERMS];
  double adjacent_slacks[TL_MAX_CHAIN_TERMS - 1];
  double tol_used;
  int holds;
} tl_chain;

typedef struct tl_conjecture1_report {
  tl_side_pair sides;
  double reformulated_lhs;
  double reformulated_rhs;
  double reformulation_residual;
  int holds;
} tl_conjecture1_report;

typedef struct tl_majorization_summary {
  size_t n;
  double min_slack;
  double total_residual;
  double tol_used;
  int holds;
} tl_majorization_summary;

typedef struct tl_proof_chain_report {
  tl_chain chain;
  double factor_sums[2];
  double factor_residual;
  double similarity_residual;
  double similarity_scale;
  double expansion_residual;
  double final_slack;
  int holds;
} tl_proof_chain_report;

typedef struct tl_p2_report {
  tl_side_pair product_route;
  double spectral_lhs;
  double spectral_rhs;
  double route_residual;
  int holds;
} tl_p2_report;

typedef struct tl_gt_chain_report {
  tl_chain chain;
  double nu;
  double end_to_end_slack;
  int holds;
} tl_gt_chain_report;

typedef struct tl_ky_fan_summary {
  double min_slack;
  double tol_used;
  int holds;
} tl_ky_fan_summary;

typedef struct tl_limit_summary {
  double trace_exp_x;
  double classical_gt_slack;
  double tol_used;
  int monotone;
  int strictly_decreasing;
  int holds;
} tl_limit_summary;

TL_API tl_status tl_problem2_sides(const tl_matrix* t, const tl_matrix* s, double p, double tol,
                                   tl_side_pair* out);
TL_API tl_status tl_conjecture1_sides(const tl_matrix* x, const tl_matrix* y, double p, double tol,
                                      tl_conjecture1_report* out);
/* lhs_sums / rhs_sums are optional n-element buffers for the partial sums. */
TL_API tl_status tl_theorem1_majorization(const tl_matrix* t, const tl_matrix* s, double tol,
                                          tl_majorization_summary* out, double* lhs_sums,
                                          double* rhs_sums);
TL_API tl_status tl_proof_chain(const tl_matrix* t, const tl_matrix* s, size_t k, double tol,
                                tl_proof_chain_report* out);
TL_API tl_status tl_p2_elementary(const tl_matrix* t, const tl_matrix* s, double tol,
                                  tl_p2_report* out);
TL_API tl_status tl_exp_nu(const tl_matrix* x, double nu, tl_matrix** out);
TL_API tl_status tl_gt_chain(const tl_matrix* x, const tl_matrix* y, double nu, double tol,
                             tl_gt_chain_report* out);
TL_API tl_status tl_ky_fan_check(const tl_matrix* a, const tl_matrix* b, double tol,
                                 tl_ky_fan_summary* out);
TL_API tl_status tl_symmetric_ky_fan_check(const tl_matrix* x, const tl_matrix* y, double tol,
                                           tl_ky_fan_summary* out);
/* deviations / gt_slacks: optional nu_count-element buffers. */
TL_API tl_status tl_gt_limit_probe(const tl_matrix* x, const tl_matrix* y, const double* nu_grid,
                                   size_t nu_count, double tol, tl_limit_summary* out,
                                   double* deviations, double* gt_slacks);

/* Generic check by name, as the sweep runs it. lhs/rhs buffers receive the
 * flattened values; lhs_count/rhs_count report how many were produced. */
typedef struct tl_check_result {
  double min_slack;
  int holds;
  size_t lhs_count;
  size_t rhs_count;
} tl_check_result;

TL_API tl_status tl_run_check(const char* check, const tl_matrix* a, const tl_matrix* b,
                              double param, const double* nu_grid, size_t nu_count, double tol,
                              tl_check_result* out, double* lhs, size_t lhs_cap, double* rhs,
                              size_t rhs_cap);

/* ---- sweeps and searches ------------------------------------------------- */

typedef struct tl_sweep_summary {
  size_t total;
  size_t held;
  size_t failed;
  double min_slack;
} tl_sweep_summary;

/* config_json: sweep configuration document; the CSV goes to output_path. */
TL_API tl_status tl_sweep_run(const char* config_json, const char* output_path,
                              tl_sweep_summary* out);

typedef struct tl_search_config {
  const char* target; /* problem2, conjecture1, gt_chain, gt_chain_step, problem2_unasserted */
  double param;       /* p or nu */
  size_t step;        /* gt_chain_step only */
  size_t n;
  size_t restarts;
  size_t max_evals_per_restart;
  double simplex_init_radius;
  uint64_t seed;
  double convergence_eps;
  size_t threads;
} tl_search_config;

typedef struct tl_search_result {
  double best_slack;
  size_t eval_count;
  size_t restarts;
  int violated;
} tl_search_result;

TL_API void tl_search_config_default(tl_search_config* config);
/* per_restart_bests: optional restarts-element buffer. Witness handles are
 * optional; when given, the caller owns the returned matrices. */
TL_API tl_status tl_search_run(const tl_search_config* config, tl_search_result* out,
                               double* per_restart_bests, tl_matrix** witness_t,
                               tl_matrix** witness_s);

#ifdef __cplusplus
}
#endif

#endif /* TRACELAB_H */
