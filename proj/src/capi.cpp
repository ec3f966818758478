#include "posme.h"

#include <cstring>
#include <new>

#include "posme/analysis.hpp"
#include "posme/bench.hpp"
#include "posme/engine.hpp"
#include "posme/hashing.hpp"
#include "posme/prover.hpp"
#include "posme/run_io.hpp"
#include "posme/verifier.hpp"

struct posme_run {
    posme::RunLog log;
};

namespace {

thread_local std::string g_last_error;

void copy_string(char* dst, size_t cap, const std::string& src)
{
    const size_t n = std::min(cap - 1, src.size());
    std::memcpy(dst, src.data(), n);
    dst[n] = '\0';
}

posme_status set_error(posme_status s, const std::string& what)
{
    g_last_error = what;
    return s;
}

// Maps C++ failures onto status codes; IO-flavored messages are detected by
// the throw sites using posme::Error with path text, so parse gets priority.
template <typename F>
posme_status guarded(F&& fn)
{
    try {
        return fn();
    } catch (const posme::ParseError& e) {
        return set_error(POSME_ERR_PARSE, e.what());
    } catch (const posme::Error& e) {
        return set_error(POSME_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::bad_alloc&) {
        return set_error(POSME_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return set_error(POSME_ERR_INTERNAL, e.what());
    }
}

posme::Params to_cpp(const posme_params& p)
{
    posme::Params out;
    out.d_hc = p.d_hc;
    out.steps = p.steps;
    out.reads_per_step = p.reads_per_step;
    out.challenges = p.challenges;
    out.recursion_depth = p.recursion_depth;
    return out;
}

posme_params from_cpp(const posme::Params& p)
{
    posme_params out;
    out.d_hc = p.d_hc;
    out.steps = p.steps;
    out.reads_per_step = p.reads_per_step;
    out.challenges = p.challenges;
    out.recursion_depth = p.recursion_depth;
    return out;
}

posme::Digest to_digest(const uint8_t bytes[32])
{
    posme::Digest d;
    std::memcpy(d.bytes.data(), bytes, 32);
    return d;
}

} // namespace

extern "C" {

const char* posme_last_error(void) { return g_last_error.c_str(); }

posme_status posme_params_validate(const posme_params* p, int allow_toy)
{
    if (!p) return set_error(POSME_ERR_INVALID_ARGUMENT, "null params");
    return guarded([&] {
        to_cpp(*p).validate(allow_toy ? posme::Params::Mode::toy
                                      : posme::Params::Mode::strict);
        return POSME_OK;
    });
}

posme_status posme_derive_seed(const void* task_id, size_t task_id_len,
                               const void* nonce, size_t nonce_len, uint8_t seed_out[32])
{
    if ((!task_id && task_id_len) || (!nonce && nonce_len) || !seed_out) {
        return set_error(POSME_ERR_INVALID_ARGUMENT, "null buffer");
    }
    return guarded([&] {
        const posme::Digest d = posme::hashing::derive_seed(
            {static_cast<const uint8_t*>(task_id), task_id_len},
            {static_cast<const uint8_t*>(nonce), nonce_len});
        std::memcpy(seed_out, d.bytes.data(), 32);
        return POSME_OK;
    });
}

posme_status posme_gen(const posme_params* p, const uint8_t seed[32], int lean,
                       posme_run** run_out)
{
    if (!p || !seed || !run_out) return set_error(POSME_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        auto result = posme::gen(to_digest(seed), to_cpp(*p),
                                 lean ? posme::Retention::lean : posme::Retention::full);
        *run_out = new posme_run{std::move(result.log)};
        return POSME_OK;
    });
}

posme_status posme_run_save(const posme_run* run, const char* dir)
{
    if (!run || !dir) return set_error(POSME_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        try {
            posme::save_run(run->log, dir);
        } catch (const posme::ParseError&) {
            throw;
        } catch (const posme::Error& e) {
            return set_error(POSME_ERR_IO, e.what());
        }
        return POSME_OK;
    });
}

posme_status posme_run_load(const char* dir, posme_run** run_out)
{
    if (!dir || !run_out) return set_error(POSME_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *run_out = new posme_run{posme::load_run(dir)};
        return POSME_OK;
    });
}

void posme_run_free(posme_run* run) { delete run; }

posme_status posme_run_params(const posme_run* run, posme_params* out)
{
    if (!run || !out) return set_error(POSME_ERR_INVALID_ARGUMENT, "null argument");
    *out = from_cpp(run->log.params);
    return POSME_OK;
}

posme_status posme_run_final_transcript(const posme_run* run, uint8_t out[32])
{
    if (!run || !out) return set_error(POSME_ERR_INVALID_ARGUMENT, "null argument");
    std::memcpy(out, run->log.final_transcript().bytes.data(), 32);
    return POSME_OK;
}

posme_status posme_run_is_lean(const posme_run* run, int* out)
{
    if (!run || !out) return set_error(POSME_ERR_INVALID_ARGUMENT, "null argument");
    *out = run->log.lean ? 1 : 0;
    return POSME_OK;
}

posme_status posme_prove(const posme_run* run, uint16_t challenges,
                         uint8_t recursion_depth, uint8_t** proof_out,
                         size_t* proof_len_out)
{
    if (!run || !proof_out || !proof_len_out) {
        return set_error(POSME_ERR_INVALID_ARGUMENT, "null argument");
    }
    return guarded([&] {
        const posme::Proof proof = posme::prove(run->log, challenges, recursion_depth);
        std::vector<uint8_t> bytes = posme::serialize_proof(proof);
        uint8_t* buf = static_cast<uint8_t*>(::operator new(bytes.size()));
        std::memcpy(buf, bytes.data(), bytes.size());
        *proof_out = buf;
        *proof_len_out = bytes.size();
        return POSME_OK;
    });
}

void posme_buffer_free(uint8_t* buf) { ::operator delete(buf); }

posme_status posme_verify(const uint8_t* proof, size_t proof_len, const uint8_t seed[32],
                          const posme_params* expected, posme_verify_report* report)
{
    if (!proof || !seed || !expected || !report) {
        return set_error(POSME_ERR_INVALID_ARGUMENT, "null argument");
    }
    return guarded([&] {
        const posme::VerifyReport rep =
            posme::verify({proof, proof_len}, to_digest(seed), to_cpp(*expected));
        report->accepted = rep.accepted ? 1 : 0;
        report->failing_challenge = rep.failing_challenge;
        copy_string(report->check, sizeof(report->check), posme::check_name(rep.check));
        copy_string(report->detail, sizeof(report->detail), rep.detail);
        return POSME_OK;
    });
}

posme_status posme_proof_peek_params(const uint8_t* proof, size_t proof_len,
                                     posme_params* out)
{
    if (!proof || !out) return set_error(POSME_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const posme::Proof parsed = posme::deserialize_proof({proof, proof_len});
        *out = from_cpp(parsed.params);
        return POSME_OK;
    });
}

uint64_t posme_verify_cost_estimate(const posme_params* p)
{
    return p ? posme::verify_cost_estimate(to_cpp(*p)) : 0;
}

uint64_t posme_blocks_per_challenge_bound(uint16_t reads_per_step, uint8_t recursion_depth)
{
    return posme::blocks_per_challenge_bound(reads_per_step, recursion_depth);
}

uint64_t posme_proof_size_estimate(const posme_params* p)
{
    return p ? posme::proof_size_estimate(to_cpp(*p)) : 0;
}

posme_status posme_mixing_stats(const posme_run* run, posme_mixing_report* out)
{
    if (!run || !out) return set_error(POSME_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const auto r = posme::analysis::mixing_stats(run->log);
        *out = {r.read_chi2_per_df, r.write_chi2_per_df, r.read_sigma,      r.write_sigma,
                r.unwritten_fraction, r.max_read_over_mean, r.max_write_over_mean,
                r.arena_blocks,      r.steps,             r.reads_per_step, r.write_density};
        return POSME_OK;
    });
}

posme_status posme_mixing_stats_streaming(const posme_params* p, const uint8_t seed[32],
                                          posme_mixing_report* out)
{
    if (!p || !seed || !out) return set_error(POSME_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const auto r = posme::analysis::mixing_stats_streaming(to_digest(seed), to_cpp(*p));
        *out = {r.read_chi2_per_df, r.write_chi2_per_df, r.read_sigma,      r.write_sigma,
                r.unwritten_fraction, r.max_read_over_mean, r.max_write_over_mean,
                r.arena_blocks,      r.steps,             r.reads_per_step, r.write_density};
        return POSME_OK;
    });
}

double posme_chernoff_tail(double n, double d, double rho, double delta)
{
    return posme::analysis::chernoff_tail(n, d, rho, delta);
}

double posme_tmto_bound(double alpha, double rho, double d, double k)
{
    return posme::analysis::tmto_bound(alpha, rho, d, k);
}

double posme_cascade_w(double alpha, unsigned rho, double d)
{
    return posme::analysis::cascade_w(alpha, rho, d);
}

double posme_st_product(double alpha, unsigned rho, double d)
{
    return posme::analysis::st_product(alpha, rho, d);
}

double posme_staleness_w(double alpha, unsigned rho, double d)
{
    return posme::analysis::staleness_w(alpha, rho, d);
}

double posme_staleness_st_product(double alpha, unsigned rho, double d)
{
    return posme::analysis::staleness_st_product(alpha, rho, d);
}

posme_status posme_tmto_simulate(const posme_run* run, double alpha, uint64_t seed,
                                 posme_tmto_report* out)
{
    if (!run || !out) return set_error(POSME_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const auto r = posme::analysis::tmto_simulate(run->log, alpha, seed);
        *out = {r.alpha,         r.rho,
                r.d,             r.analytic_bound,
                r.simulated_cost, r.simulated_cost_final,
                r.penalty_ratio, r.penalty_ratio_final,
                r.misses,        r.mean_chain_len};
        return POSME_OK;
    });
}

posme_status posme_cascade_monte_carlo(double alpha, unsigned rho, uint16_t d,
                                       uint64_t trials, uint64_t seed, double* mean_out,
                                       double* std_error_out)
{
    if (!mean_out) return set_error(POSME_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const auto r = posme::analysis::cascade_monte_carlo(alpha, rho, d, trials, seed);
        *mean_out = r.mean;
        if (std_error_out) *std_error_out = r.std_error;
        return POSME_OK;
    });
}

posme_status posme_adaptive_simulate(const posme_run* run, double alpha, int policy,
                                     uint64_t seed, posme_adaptive_report* out)
{
    if (!run || !out) return set_error(POSME_ERR_INVALID_ARGUMENT, "null argument");
    if (policy < 0 || policy > 2) {
        return set_error(POSME_ERR_INVALID_ARGUMENT, "unknown policy");
    }
    return guarded([&] {
        const auto r = posme::analysis::adaptive_simulate(
            run->log, alpha, static_cast<posme::analysis::AdaptivePolicy>(policy), seed);
        out->policy = policy;
        out->alpha = r.alpha;
        out->reads = r.reads;
        out->hits = r.hits;
        out->hit_rate = r.hit_rate;
        return POSME_OK;
    });
}

double posme_two_proportion_p_value(uint64_t hits1, uint64_t n1, uint64_t hits2,
                                    uint64_t n2)
{
    return posme::analysis::two_proportion_p_value(hits1, n1, hits2, n2);
}

posme_status posme_bench_steps(uint8_t d_hc, uint64_t rho, uint16_t reads_per_step,
                               int reps, uint64_t steps, const uint8_t seed[32],
                               posme_bench_report* out)
{
    if (!seed || !out) return set_error(POSME_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const auto r = posme::bench::bench_steps_single(d_hc, rho, reads_per_step, reps,
                                                        steps, to_digest(seed));
        out->arena_bytes = r.arena_bytes;
        out->d_hc = r.d_hc;
        out->steps = r.steps;
        out->reads_per_step = r.reads_per_step;
        out->reps = r.reps;
        out->ns_per_step = r.ns_per_step;
        out->hash_fraction = r.hash_fraction;
        out->init_seconds = r.init_seconds;
        out->compressions_per_step = r.compressions_per_step;
        out->pinned = r.pinned ? 1 : 0;
        copy_string(out->machine, sizeof(out->machine), r.machine);
        copy_string(out->timestamp, sizeof(out->timestamp), r.timestamp);
        std::memcpy(out->final_transcript, r.final_transcript.bytes.data(), 32);
        return POSME_OK;
    });
}

posme_status posme_bench_pointer_chase(size_t arena_bytes, uint64_t steps, uint64_t seed,
                                       double* ns_per_load_out)
{
    if (!ns_per_load_out) return set_error(POSME_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *ns_per_load_out = posme::bench::bench_pointer_chase_ns(arena_bytes, steps, seed);
        return POSME_OK;
    });
}

posme_status posme_bench_init(uint8_t d_hc, const uint8_t seed[32], double* seconds_out)
{
    if (!seed || !seconds_out) return set_error(POSME_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *seconds_out = posme::bench::bench_init_seconds(d_hc, to_digest(seed));
        return POSME_OK;
    });
}

posme_status posme_machine_descriptor(char* buf, size_t buf_len)
{
    if (!buf || buf_len == 0) return set_error(POSME_ERR_INVALID_ARGUMENT, "null buffer");
    copy_string(buf, buf_len, posme::bench::machine_descriptor());
    return POSME_OK;
}

} // extern "C"
