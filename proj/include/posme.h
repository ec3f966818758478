/* posme — proof of sequential memory execution.
 *
 * C API over the core library: opaque handles, status codes, caller-owned
 * buffers released through posme_buffer_free. All functions are
 * thread-compatible; a posme_run handle must not be used concurrently.
 */

#ifndef POSME_H
#define POSME_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum posme_status {
    POSME_OK = 0,
    POSME_ERR_INVALID_ARGUMENT = 1,
    POSME_ERR_IO = 2,
    POSME_ERR_PARSE = 3,
    POSME_ERR_STATE = 4,
    POSME_ERR_INTERNAL = 5
} posme_status;

/* Human-readable message for the most recent error on this thread. */
const char* posme_last_error(void);

typedef struct posme_params {
    uint8_t d_hc;            /* arena dimension; N = 2^d_hc            */
    uint64_t steps;          /* K                                      */
    uint16_t reads_per_step; /* d                                      */
    uint16_t challenges;     /* Q                                      */
    uint8_t recursion_depth; /* R                                      */
} posme_params;

/* allow_toy != 0 relaxes the recommended floors (K >= N, d >= 4, Q >= 64,
 * R >= 2) for desk-scale experiments. */
posme_status posme_params_validate(const posme_params* p, int allow_toy);

/* seed = H(task_id || nonce), with length-prefixed framing. */
posme_status posme_derive_seed(const void* task_id, size_t task_id_len,
                               const void* nonce, size_t nonce_len,
                               uint8_t seed_out[32]);

/* ---- execution ---- */

typedef struct posme_run posme_run; /* opaque: run log (roots, transcripts, traces) */

/* Runs initialization plus K steps. lean != 0 keeps only roots and
 * transcripts (the prover then re-derives the rest by replay). */
posme_status posme_gen(const posme_params* p, const uint8_t seed[32], int lean,
                       posme_run** run_out);

posme_status posme_run_save(const posme_run* run, const char* dir);
posme_status posme_run_load(const char* dir, posme_run** run_out);
void posme_run_free(posme_run* run);

posme_status posme_run_params(const posme_run* run, posme_params* out);
posme_status posme_run_final_transcript(const posme_run* run, uint8_t out[32]);
posme_status posme_run_is_lean(const posme_run* run, int* out);

/* ---- proving and verification ---- */

/* Serialized proof in a malloc'd buffer; release with posme_buffer_free. */
posme_status posme_prove(const posme_run* run, uint16_t challenges,
                         uint8_t recursion_depth, uint8_t** proof_out,
                         size_t* proof_len_out);

void posme_buffer_free(uint8_t* buf);

typedef struct posme_verify_report {
    int accepted;               /* 1 accept, 0 reject                      */
    uint32_t failing_challenge; /* 1-based, 0 if not challenge-specific    */
    char check[24];             /* failed check name, "ok" on accept       */
    char detail[240];
} posme_verify_report;

/* Always fills the report; returns non-OK only for argument errors. The
 * "parse" check marks malformed input (CLI exit 2), any other check a
 * verification reject (exit 1). */
posme_status posme_verify(const uint8_t* proof, size_t proof_len,
                          const uint8_t seed[32], const posme_params* expected,
                          posme_verify_report* report);

/* Reads the parameter block of a serialized proof without verifying. */
posme_status posme_proof_peek_params(const uint8_t* proof, size_t proof_len,
                                     posme_params* out);

uint64_t posme_verify_cost_estimate(const posme_params* p);
uint64_t posme_blocks_per_challenge_bound(uint16_t reads_per_step,
                                          uint8_t recursion_depth);
uint64_t posme_proof_size_estimate(const posme_params* p);

/* ---- analysis ---- */

typedef struct posme_mixing_report {
    double read_chi2_per_df;
    double write_chi2_per_df;
    double read_sigma;
    double write_sigma;
    double unwritten_fraction;
    double max_read_over_mean;
    double max_write_over_mean;
    uint64_t arena_blocks;
    uint64_t steps;
    uint16_t reads_per_step;
    double write_density;
} posme_mixing_report;

posme_status posme_mixing_stats(const posme_run* run, posme_mixing_report* out);

/* Same statistics from a fresh streaming execution (no retained traces). */
posme_status posme_mixing_stats_streaming(const posme_params* p,
                                          const uint8_t seed[32],
                                          posme_mixing_report* out);

double posme_chernoff_tail(double n, double d, double rho, double delta);
double posme_tmto_bound(double alpha, double rho, double d, double k);
double posme_cascade_w(double alpha, unsigned rho, double d);
double posme_st_product(double alpha, unsigned rho, double d);
double posme_staleness_w(double alpha, unsigned rho, double d);
double posme_staleness_st_product(double alpha, unsigned rho, double d);

typedef struct posme_tmto_report {
    double alpha;
    double rho;
    uint16_t d;
    double analytic_bound;
    double simulated_cost;
    double simulated_cost_final;
    double penalty_ratio;
    double penalty_ratio_final;
    uint64_t misses;
    double mean_chain_len;
} posme_tmto_report;

posme_status posme_tmto_simulate(const posme_run* run, double alpha, uint64_t seed,
                                 posme_tmto_report* out);

posme_status posme_cascade_monte_carlo(double alpha, unsigned rho, uint16_t d,
                                       uint64_t trials, uint64_t seed,
                                       double* mean_out, double* std_error_out);

typedef enum posme_adaptive_policy {
    POSME_POLICY_FIXED_RANDOM = 0,
    POSME_POLICY_MOST_RECENTLY_WRITTEN = 1,
    POSME_POLICY_MOST_FREQUENTLY_READ = 2
} posme_adaptive_policy;

typedef struct posme_adaptive_report {
    int policy;
    double alpha;
    uint64_t reads;
    uint64_t hits;
    double hit_rate;
} posme_adaptive_report;

posme_status posme_adaptive_simulate(const posme_run* run, double alpha, int policy,
                                     uint64_t seed, posme_adaptive_report* out);

double posme_two_proportion_p_value(uint64_t hits1, uint64_t n1, uint64_t hits2,
                                    uint64_t n2);

/* ---- benchmarks ---- */

typedef struct posme_bench_report {
    uint64_t arena_bytes;
    uint8_t d_hc;
    uint64_t steps;
    uint16_t reads_per_step;
    int reps;
    double ns_per_step;
    double hash_fraction;
    double init_seconds;
    uint64_t compressions_per_step;
    int pinned;
    char machine[128];
    char timestamp[24];
    uint8_t final_transcript[32];
} posme_bench_report;

posme_status posme_bench_steps(uint8_t d_hc, uint64_t rho, uint16_t reads_per_step,
                               int reps, uint64_t steps, const uint8_t seed[32],
                               posme_bench_report* out);

posme_status posme_bench_pointer_chase(size_t arena_bytes, uint64_t steps,
                                       uint64_t seed, double* ns_per_load_out);

posme_status posme_bench_init(uint8_t d_hc, const uint8_t seed[32],
                              double* seconds_out);

posme_status posme_machine_descriptor(char* buf, size_t buf_len);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* POSME_H */
