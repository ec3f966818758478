#include "posme/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace posme::analysis {
namespace {

// splitmix64; used to derive independent per-trial generator seeds.
uint64_t splitmix64(uint64_t& state)
{
    uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Unbiased bounded uniform (Lemire), independent of library distributions so
// simulation outputs are reproducible across standard libraries.
uint64_t uniform_below(std::mt19937_64& rng, uint64_t bound)
{
    if (bound == 0) throw Error("uniform_below: empty range");
    while (true) {
        const uint64_t x = rng();
        const uint64_t lim = bound * (UINT64_MAX / bound);
        if (x < lim) return x % bound;
    }
}

// Distinct sample of `count` vertices out of n (partial Fisher-Yates).
std::vector<uint8_t> sample_membership(uint64_t n, uint64_t count, uint64_t seed)
{
    std::vector<uint64_t> ids(n);
    for (uint64_t i = 0; i < n; ++i) ids[i] = i;
    std::mt19937_64 rng(seed);
    std::vector<uint8_t> in_set(n, 0);
    for (uint64_t i = 0; i < count; ++i) {
        const uint64_t j = i + uniform_below(rng, n - i);
        std::swap(ids[i], ids[j]);
        in_set[ids[i]] = 1;
    }
    return in_set;
}

struct CountStats {
    double chi2_per_df = 0;
    double sigma = 0;
    double max_over_mean = 0;
    uint64_t zeros = 0;
};

CountStats count_stats(const std::vector<uint32_t>& counts, double expected)
{
    CountStats s;
    const uint64_t n = counts.size();
    if (n == 0 || expected <= 0) {
        s.zeros = n;
        return s;
    }
    double chi2 = 0;
    double var = 0;
    uint32_t max = 0;
    for (uint32_t c : counts) {
        const double dlt = c - expected;
        chi2 += dlt * dlt;
        var += dlt * dlt;
        if (c > max) max = c;
        if (c == 0) ++s.zeros;
    }
    chi2 /= expected;
    s.chi2_per_df = chi2 / static_cast<double>(n - 1);
    // Population deviation around the exact mean (the mean of counts equals
    // `expected` by construction: every step contributes the same total).
    s.sigma = std::sqrt(var / static_cast<double>(n));
    s.max_over_mean = max / expected;
    return s;
}

MixingReport report_from_counts(std::vector<uint32_t>& reads, std::vector<uint32_t>& writes,
                                const Params& params)
{
    MixingReport r;
    r.arena_blocks = params.arena_blocks();
    r.steps = params.steps;
    r.reads_per_step = params.reads_per_step;
    r.write_density = params.write_density();

    const double n = static_cast<double>(r.arena_blocks);
    const double read_mean =
        static_cast<double>(params.steps) * params.reads_per_step / n;
    const double write_mean = static_cast<double>(params.steps) / n;

    const CountStats rs = count_stats(reads, read_mean);
    const CountStats ws = count_stats(writes, write_mean);
    r.read_chi2_per_df = rs.chi2_per_df;
    r.write_chi2_per_df = ws.chi2_per_df;
    r.read_sigma = rs.sigma;
    r.write_sigma = ws.sigma;
    r.max_read_over_mean = rs.max_over_mean;
    r.max_write_over_mean = ws.max_over_mean;
    r.unwritten_fraction = static_cast<double>(ws.zeros) / n;
    return r;
}

} // namespace

MixingReport mixing_stats(const RunLog& log)
{
    if (!log.has_step_records()) {
        throw Error("mixing_stats needs step records (full-retention run)");
    }
    const uint64_t n = log.params.arena_blocks();
    std::vector<uint32_t> reads(n, 0);
    std::vector<uint32_t> writes(n, 0);
    for (uint64_t v : log.read_coords) ++reads[v];
    for (uint64_t v : log.write_coords) ++writes[v];
    return report_from_counts(reads, writes, log.params);
}

MixingReport mixing_stats_streaming(const Digest& seed, const Params& params)
{
    const uint64_t n = params.arena_blocks();
    std::vector<uint32_t> reads(n, 0);
    std::vector<uint32_t> writes(n, 0);
    gen(seed, params, Retention::lean, [&](uint64_t, const StepScratch& s) {
        for (uint64_t v : s.reads) ++reads[v];
        ++writes[s.write];
    });
    return report_from_counts(reads, writes, params);
}

double chernoff_tail(double n, double d, double rho, double delta)
{
    return n * std::exp(-delta * delta * d * rho / 3.0);
}

double tmto_bound(double alpha, double rho, double d, double k)
{
    if (alpha < 0 || alpha > 1) throw Error("alpha must be in [0, 1]");
    return k * d * (1.0 + (1.0 - alpha) * (2.0 * rho + 1.0));
}

TmtoReport tmto_simulate(const RunLog& log, double alpha, uint64_t seed)
{
    if (alpha < 0 || alpha > 1) throw Error("alpha must be in [0, 1]");
    if (!log.has_step_records()) {
        throw Error("tmto_simulate needs step records (full-retention run)");
    }
    const uint64_t n = log.params.arena_blocks();
    const uint16_t d = log.params.reads_per_step;
    const uint64_t k = log.params.steps;
    const uint64_t stored = static_cast<uint64_t>(alpha * static_cast<double>(n));

    const std::vector<uint8_t> in_set = sample_membership(n, stored, seed);

    std::vector<uint32_t> writes_so_far(n, 0);
    std::vector<uint32_t> writes_total(n, 0);
    for (uint64_t v : log.write_coords) ++writes_total[v];

    double cost = 0;
    double cost_final = 0;
    uint64_t misses = 0;
    uint64_t chain_sum = 0;
    for (uint64_t t = 1; t <= k; ++t) {
        for (uint16_t j = 0; j < d; ++j) {
            const uint64_t v = log.read_coords[(t - 1) * d + j];
            if (in_set[v]) {
                cost += 1;
                cost_final += 1;
            } else {
                ++misses;
                chain_sum += writes_so_far[v];
                cost += 2.0 * writes_so_far[v] + 1.0;
                cost_final += 2.0 * writes_total[v] + 1.0;
            }
        }
        ++writes_so_far[log.write_coords[t - 1]];
    }

    TmtoReport r;
    r.alpha = alpha;
    r.rho = log.params.write_density();
    r.d = d;
    r.analytic_bound = tmto_bound(alpha, r.rho, d, static_cast<double>(k));
    r.simulated_cost = cost;
    r.simulated_cost_final = cost_final;
    const double honest = static_cast<double>(k) * d;
    r.penalty_ratio = honest > 0 ? cost / honest : 0;
    r.penalty_ratio_final = honest > 0 ? cost_final / honest : 0;
    r.misses = misses;
    r.mean_chain_len = misses ? static_cast<double>(chain_sum) / misses : 0;
    return r;
}

double cascade_w(double alpha, unsigned rho, double d)
{
    if (alpha < 0 || alpha > 1) throw Error("alpha must be in [0, 1]");
    const double b = d * (1.0 - alpha);
    double total = 0;
    double term = 1;
    for (unsigned l = 0; l <= rho; ++l) {
        total += term;
        term *= b;
    }
    return total;
}

double st_product(double alpha, unsigned rho, double d)
{
    return alpha * (1.0 - alpha) * d * cascade_w(alpha, rho, d) / rho;
}

double staleness_w(double alpha, unsigned rho, double d)
{
    if (alpha < 0 || alpha > 1) throw Error("alpha must be in [0, 1]");
    double total = 1;
    double prod = 1;
    for (unsigned l = 1; l <= rho; ++l) {
        prod *= d * (1.0 - alpha * std::exp(-static_cast<double>(l - 1)));
        total += prod;
    }
    return total;
}

double staleness_st_product(double alpha, unsigned rho, double d)
{
    return alpha * (1.0 - alpha) * d * staleness_w(alpha, rho, d) / rho;
}

std::vector<CascadeRow> cascade_table(const std::vector<double>& alphas, unsigned rho,
                                      double d)
{
    std::vector<CascadeRow> rows;
    rows.reserve(alphas.size());
    for (double a : alphas) {
        CascadeRow r;
        r.alpha = a;
        r.branching = d * (1.0 - a);
        r.w = cascade_w(a, rho, d);
        r.st_over_k2 = st_product(a, rho, d);
        r.regime = r.branching > 1.0 + 1e-12   ? "supercritical"
                   : r.branching < 1.0 - 1e-12 ? "subcritical"
                                               : "critical";
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<StalenessRow> staleness_table(const std::vector<double>& alphas, unsigned rho,
                                          double d)
{
    std::vector<StalenessRow> rows;
    rows.reserve(alphas.size());
    for (double a : alphas) {
        StalenessRow r;
        r.alpha = a;
        r.w = cascade_w(a, rho, d);
        r.w_star = staleness_w(a, rho, d);
        r.st = st_product(a, rho, d);
        r.st_star = staleness_st_product(a, rho, d);
        r.gain = r.st > 0 ? r.st_star / r.st : 0;
        rows.push_back(r);
    }
    return rows;
}

MonteCarloResult cascade_monte_carlo(double alpha, unsigned rho, uint16_t d,
                                     uint64_t trials, uint64_t seed)
{
    if (alpha < 0 || alpha > 1) throw Error("alpha must be in [0, 1]");
    if (trials == 0) throw Error("trials must be positive");
    const double miss = 1.0 - alpha;

    double sum = 0;
    double sum_sq = 0;
    for (uint64_t trial = 0; trial < trials; ++trial) {
        uint64_t state = seed + trial;
        std::mt19937_64 rng(splitmix64(state));
        // All nodes of one level share the offspring distribution, so the
        // level's total offspring is one Binomial(level_size * d, miss) draw.
        uint64_t level_size = 1;
        uint64_t total = 1;
        for (unsigned l = 0; l < rho && level_size > 0 && miss > 0; ++l) {
            std::binomial_distribution<uint64_t> offspring(level_size * d, miss);
            level_size = offspring(rng);
            total += level_size;
        }
        sum += static_cast<double>(total);
        sum_sq += static_cast<double>(total) * static_cast<double>(total);
    }

    MonteCarloResult r;
    r.trials = trials;
    r.mean = sum / static_cast<double>(trials);
    if (trials > 1) {
        const double var = (sum_sq - sum * sum / static_cast<double>(trials)) /
                           static_cast<double>(trials - 1);
        r.std_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(trials));
    }
    return r;
}

const char* policy_name(AdaptivePolicy p)
{
    switch (p) {
        case AdaptivePolicy::fixed_random: return "fixed_random";
        case AdaptivePolicy::most_recently_written: return "most_recently_written";
        case AdaptivePolicy::most_frequently_read: return "most_frequently_read";
    }
    return "unknown";
}

namespace {

// Exact top-k by last-write recency: a doubly linked list over all vertices,
// most recent first, with a boundary marker at position k. Vertices never
// written rank by ascending index behind all written ones.
class RecencySet {
public:
    RecencySet(uint64_t n, uint64_t k) : n_(n), k_(k), next_(n + 1), prev_(n + 1), in_(n, 0)
    {
        // Sentinel at index n; initial order 0, 1, .., n-1.
        next_[n] = 0;
        prev_[n] = n - 1;
        for (uint64_t v = 0; v < n; ++v) {
            next_[v] = (v + 1 == n) ? n : v + 1;
            prev_[v] = (v == 0) ? n : v - 1;
            if (v < k) in_[v] = 1;
        }
        boundary_ = (k == 0) ? n : k - 1; // k-th element (last member)
    }

    bool contains(uint64_t v) const { return in_[v] != 0; }

    void touch(uint64_t v)
    {
        if (k_ == 0) return;
        if (v == next_[n_]) return; // already most recent
        const bool was_in = in_[v] != 0;
        if (v == boundary_) boundary_ = prev_[v];
        // Unlink, relink at front.
        next_[prev_[v]] = next_[v];
        prev_[next_[v]] = prev_[v];
        const uint64_t head = next_[n_];
        next_[n_] = v;
        prev_[v] = n_;
        next_[v] = head;
        prev_[head] = v;
        if (!was_in) {
            in_[v] = 1;
            in_[boundary_] = 0; // previous k-th falls out
            boundary_ = prev_[boundary_];
        }
    }

private:
    uint64_t n_;
    uint64_t k_;
    uint64_t boundary_;
    std::vector<uint64_t> next_, prev_;
    std::vector<uint8_t> in_;
};

// Exact top-k by read count with incumbent-wins ties: count buckets hold the
// member vertices; a non-member whose count exceeds the members' minimum
// evicts one minimal member.
class FrequencySet {
public:
    FrequencySet(uint64_t n, uint64_t k)
        : k_(k), count_(n, 0), in_(n, 0), bucket_next_(n), bucket_prev_(n)
    {
        buckets_.resize(4, NONE);
        for (uint64_t v = 0; v < k; ++v) {
            in_[v] = 1;
            bucket_insert(0, v);
        }
        min_count_ = 0;
    }

    bool contains(uint64_t v) const { return in_[v] != 0; }

    void record_read(uint64_t v)
    {
        const uint32_t c = count_[v]++;
        if (k_ == 0) return;
        if (in_[v]) {
            bucket_remove(c, v);
            bucket_insert(c + 1, v);
            if (c == min_count_ && buckets_[c] == NONE) {
                while (buckets_[min_count_] == NONE) ++min_count_;
            }
        } else if (c + 1 > min_count_) {
            const uint64_t evict = buckets_[min_count_];
            bucket_remove(min_count_, evict);
            in_[evict] = 0;
            in_[v] = 1;
            bucket_insert(c + 1, v);
            while (buckets_[min_count_] == NONE) ++min_count_;
        }
    }

private:
    static constexpr uint64_t NONE = ~uint64_t{0};

    void ensure_bucket(uint32_t c)
    {
        if (c >= buckets_.size()) buckets_.resize(2 * c + 1, NONE);
    }
    void bucket_insert(uint32_t c, uint64_t v)
    {
        ensure_bucket(c);
        bucket_prev_[v] = NONE;
        bucket_next_[v] = buckets_[c];
        if (buckets_[c] != NONE) bucket_prev_[buckets_[c]] = v;
        buckets_[c] = v;
    }
    void bucket_remove(uint32_t c, uint64_t v)
    {
        if (bucket_prev_[v] != NONE) {
            bucket_next_[bucket_prev_[v]] = bucket_next_[v];
        } else {
            buckets_[c] = bucket_next_[v];
        }
        if (bucket_next_[v] != NONE) bucket_prev_[bucket_next_[v]] = bucket_prev_[v];
    }

    uint64_t k_;
    uint32_t min_count_ = 0;
    std::vector<uint32_t> count_;
    std::vector<uint8_t> in_;
    std::vector<uint64_t> buckets_; // head per count
    std::vector<uint64_t> bucket_next_, bucket_prev_;
};

} // namespace

AdaptiveReport adaptive_simulate(const RunLog& log, double alpha, AdaptivePolicy policy,
                                 uint64_t seed)
{
    if (alpha < 0 || alpha > 1) throw Error("alpha must be in [0, 1]");
    if (!log.has_step_records()) {
        throw Error("adaptive_simulate needs step records (full-retention run)");
    }
    const uint64_t n = log.params.arena_blocks();
    const uint16_t d = log.params.reads_per_step;
    const uint64_t k = log.params.steps;
    const uint64_t stored = static_cast<uint64_t>(alpha * static_cast<double>(n));

    AdaptiveReport rep;
    rep.policy = policy;
    rep.alpha = alpha;
    rep.reads = k * d;

    std::vector<uint8_t> fixed;
    std::optional<RecencySet> recency;
    std::optional<FrequencySet> frequency;
    switch (policy) {
        case AdaptivePolicy::fixed_random:
            fixed = sample_membership(n, stored, seed);
            break;
        case AdaptivePolicy::most_recently_written:
            recency.emplace(n, stored);
            break;
        case AdaptivePolicy::most_frequently_read:
            frequency.emplace(n, stored);
            break;
    }

    uint64_t hits = 0;
    for (uint64_t t = 1; t <= k; ++t) {
        // The set is frozen during a step; history updates land between steps.
        if (t > 1) {
            if (recency) recency->touch(log.write_coords[t - 2]);
            if (frequency) {
                for (uint16_t j = 0; j < d; ++j) {
                    frequency->record_read(log.read_coords[(t - 2) * d + j]);
                }
            }
        }
        for (uint16_t j = 0; j < d; ++j) {
            const uint64_t v = log.read_coords[(t - 1) * d + j];
            const bool hit = recency      ? recency->contains(v)
                             : frequency  ? frequency->contains(v)
                                          : fixed[v] != 0;
            hits += hit;
        }
    }
    rep.hits = hits;
    rep.hit_rate = rep.reads ? static_cast<double>(hits) / static_cast<double>(rep.reads) : 0;
    return rep;
}

double two_proportion_p_value(uint64_t hits1, uint64_t n1, uint64_t hits2, uint64_t n2)
{
    if (n1 == 0 || n2 == 0) throw Error("empty sample");
    const double p1 = static_cast<double>(hits1) / static_cast<double>(n1);
    const double p2 = static_cast<double>(hits2) / static_cast<double>(n2);
    const double pooled =
        static_cast<double>(hits1 + hits2) / static_cast<double>(n1 + n2);
    const double se = std::sqrt(pooled * (1.0 - pooled) *
                                (1.0 / static_cast<double>(n1) + 1.0 / static_cast<double>(n2)));
    if (se == 0) return 1.0;
    const double z = std::abs(p1 - p2) / se;
    return std::erfc(z / std::sqrt(2.0));
}

} // namespace posme::analysis
