#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "posme/engine.hpp"

namespace posme::analysis {

/// Address-uniformity statistics over a run (exact integer counts).
struct MixingReport {
    double read_chi2_per_df = 0;
    double write_chi2_per_df = 0;
    double read_sigma = 0;
    double write_sigma = 0;
    double unwritten_fraction = 0;
    double max_read_over_mean = 0;
    double max_write_over_mean = 0;
    uint64_t arena_blocks = 0;
    uint64_t steps = 0;
    uint16_t reads_per_step = 0;
    double write_density = 0;
};

/// Per-vertex read/write count statistics from the step records.
MixingReport mixing_stats(const RunLog& log);

/// Same statistics accumulated during a fresh execution, without retaining
/// step records; for arena sizes where the full log is impractical.
MixingReport mixing_stats_streaming(const Digest& seed, const Params& params);

/// Chernoff tail N * exp(-delta^2 * d * rho / 3) on the maximum read count.
double chernoff_tail(double n, double d, double rho, double delta);

/// Recomputation lower bound K * d * (1 + (1 - alpha) * (2 rho + 1)).
double tmto_bound(double alpha, double rho, double d, double k);

struct TmtoReport {
    double alpha = 0;
    double rho = 0;
    uint16_t d = 0;
    double analytic_bound = 0;       // hash count, end-of-run convention
    double simulated_cost = 0;       // hash count, chain lengths as of each read
    double simulated_cost_final = 0; // hash count, full final chain lengths
    double penalty_ratio = 0;        // simulated_cost / (K d)
    double penalty_ratio_final = 0;
    uint64_t misses = 0;
    double mean_chain_len = 0; // overwrites seen per missed read
};

/// Replays the run against a random stored set of floor(alpha N) vertices.
/// A read costs 1 on a hit; on a miss, one hash per prior write to that
/// vertex for each of the two fields, plus the read itself. Reported under
/// both chain-length conventions.
TmtoReport tmto_simulate(const RunLog& log, double alpha, uint64_t seed);

/// W(alpha, rho) = sum_{l=0}^{rho} [d (1 - alpha)]^l.
double cascade_w(double alpha, unsigned rho, double d);

/// S.T / K^2 = alpha (1 - alpha) d W / rho.
double st_product(double alpha, unsigned rho, double d);

/// W* with the depth-decaying hit rate alpha e^{-k}:
/// sum_{l=0}^{rho} prod_{k=0}^{l-1} d (1 - alpha e^{-k}).
double staleness_w(double alpha, unsigned rho, double d);

/// Strengthened S.T / K^2 using W*.
double staleness_st_product(double alpha, unsigned rho, double d);

struct CascadeRow {
    double alpha;
    double branching; // d (1 - alpha)
    double w;
    double st_over_k2;
    std::string regime; // supercritical / critical / subcritical
};

struct StalenessRow {
    double alpha;
    double w;
    double w_star;
    double st;
    double st_star;
    double gain; // st_star / st
};

std::vector<CascadeRow> cascade_table(const std::vector<double>& alphas, unsigned rho,
                                      double d);
std::vector<StalenessRow> staleness_table(const std::vector<double>& alphas, unsigned rho,
                                          double d);

struct MonteCarloResult {
    double mean = 0;
    double std_error = 0; // of the mean
    uint64_t trials = 0;
};

/// Galton-Watson process with offspring Binomial(d, 1 - alpha) per node,
/// depth capped at rho; returns the mean total node count. Per-trial seeds
/// derive from the given seed, so the result is independent of evaluation
/// order.
MonteCarloResult cascade_monte_carlo(double alpha, unsigned rho, uint16_t d,
                                     uint64_t trials, uint64_t seed);

enum class AdaptivePolicy {
    fixed_random,           // static random set, the Theorem baseline
    most_recently_written,  // rebuilt between steps from the write history
    most_frequently_read,   // rebuilt between steps from the read history
};

const char* policy_name(AdaptivePolicy p);

struct AdaptiveReport {
    AdaptivePolicy policy;
    double alpha = 0;
    uint64_t reads = 0;
    uint64_t hits = 0;
    double hit_rate = 0;
};

/// Replays the run letting the stored set be rebuilt between steps from the
/// execution history visible so far; reports the per-read hit rate.
AdaptiveReport adaptive_simulate(const RunLog& log, double alpha, AdaptivePolicy policy,
                                 uint64_t seed);

/// Two-proportion z-test p-value for hit-rate equality.
double two_proportion_p_value(uint64_t hits1, uint64_t n1, uint64_t hits2, uint64_t n2);

} // namespace posme::analysis
