#include "posme/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <ctime>
#include <fstream>
#include <random>
#include <thread>

#ifdef __linux__
#include <sched.h>
#endif

#include "posme/blake3.hpp"
#include "posme/hashing.hpp"

namespace posme::bench {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

bool pin_to_one_cpu()
{
#ifdef __linux__
    cpu_set_t set;
    CPU_ZERO(&set);
    CPU_SET(0, &set);
    return sched_setaffinity(0, sizeof(set), &set) == 0;
#else
    return false;
#endif
}

std::string iso_timestamp()
{
    char buf[32];
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Everything the hash-only replay needs, recorded once per measured run.
struct Recording {
    std::vector<Block> read_values;   // K * d
    std::vector<Block> old_blocks;    // K
    std::vector<Digest> siblings;     // K * d_hc, pre-write path bottom-up
};

} // namespace

std::string machine_descriptor()
{
    std::string model = "unknown-cpu";
    std::ifstream f("/proc/cpuinfo");
    std::string line;
    while (std::getline(f, line)) {
        if (line.rfind("model name", 0) == 0) {
            const auto pos = line.find(':');
            if (pos != std::string::npos) {
                model = line.substr(pos + 2);
            }
            break;
        }
    }
    return model + " (" + std::to_string(std::thread::hardware_concurrency()) + " hw threads)";
}

StepBenchReport bench_steps_single(uint8_t d_hc, uint64_t rho, uint16_t d, int reps,
                                   uint64_t steps, const Digest& seed)
{
    if (reps < 1) throw Error("reps must be positive");
    const uint64_t n = uint64_t{1} << d_hc;
    uint64_t k = rho * n;
    if (steps > 0 && steps < k) k = steps;
    if (k == 0) throw Error("nothing to measure: zero steps");

    StepBenchReport rep;
    rep.d_hc = d_hc;
    rep.arena_bytes = n * sizeof(Block);
    rep.steps = k;
    rep.reads_per_step = d;
    rep.reps = reps;
    rep.machine = machine_descriptor();
    rep.timestamp = iso_timestamp();
    rep.pinned = pin_to_one_cpu();

    const auto t0 = Clock::now();
    InitResult init = init_arena(seed, d_hc);
    rep.init_seconds = seconds_since(t0);

    // Timed full loops on fresh copies of the initial state.
    std::vector<double> loop_seconds;
    Digest t_k_out;
    for (int r = 0; r < reps; ++r) {
        Arena arena = init.arena;
        MerkleTree tree = init.tree;
        StepScratch s;
        Digest t_prev = init.t0;
        const auto start = Clock::now();
        for (uint64_t t = 1; t <= k; ++t) {
            step_into(t, arena, tree, t_prev, d, s);
            t_prev = s.transcript;
        }
        loop_seconds.push_back(seconds_since(start));
        t_k_out = t_prev;
    }
    rep.final_transcript = t_k_out;
    rep.ns_per_step = median(loop_seconds) * 1e9 / static_cast<double>(k);

    // Unmeasured recording pass, then hash-only replays over the recording.
    Recording rec;
    rec.read_values.reserve(k * d);
    rec.old_blocks.reserve(k);
    rec.siblings.reserve(k * d_hc);
    {
        Arena arena = init.arena;
        MerkleTree tree = init.tree;
        StepScratch s;
        Digest t_prev = init.t0;
        for (uint64_t t = 1; t <= k; ++t) {
            // Record this step's inputs before the write lands.
            Digest c = t_prev;
            for (uint16_t j = 0; j < d; ++j) {
                const uint64_t v = hashing::derive_read_coord(c, j, d_hc);
                rec.read_values.push_back(arena[v]);
                c = hashing::chain_cursor(c, arena[v].data, arena[v].causal);
            }
            const uint64_t vw = hashing::derive_write_coord(c, d_hc);
            rec.old_blocks.push_back(arena[vw]);
            const MerklePath path = tree.open(vw);
            rec.siblings.insert(rec.siblings.end(), path.siblings.begin(),
                                path.siblings.end());
            step_into(t, arena, tree, t_prev, d, s);
            t_prev = s.transcript;
        }
    }
    // The recording walk re-derives the coordinate chain, so its compression
    // count is inflated; count one clean loop for the replay-equality check.
    uint64_t loop_compressions = 0;
    {
        Arena arena = init.arena;
        MerkleTree tree = init.tree;
        StepScratch s;
        Digest t_prev = init.t0;
        const uint64_t c0 = blake3::compression_count();
        for (uint64_t t = 1; t <= k; ++t) {
            step_into(t, arena, tree, t_prev, d, s);
            t_prev = s.transcript;
        }
        loop_compressions = blake3::compression_count() - c0;
    }

    std::vector<double> replay_seconds;
    uint64_t replay_compressions = 0;
    for (int r = 0; r < reps; ++r) {
        Digest t_prev = init.t0;
        const uint64_t c0 = blake3::compression_count();
        const auto start = Clock::now();
        const Block* rv = rec.read_values.data();
        const Digest* sb = rec.siblings.data();
        for (uint64_t t = 1; t <= k; ++t) {
            Digest c = t_prev;
            for (uint16_t j = 0; j < d; ++j) {
                (void)hashing::derive_read_coord(c, j, d_hc);
                c = hashing::chain_cursor(c, rv[j].data, rv[j].causal);
            }
            rv += d;
            const uint64_t vw = hashing::derive_write_coord(c, d_hc);
            const Block& old = rec.old_blocks[t - 1];
            Block updated;
            updated.data = hashing::bind_data(old.data, c, old.causal);
            updated.causal = hashing::bind_causal(old.causal, c, t);
            Digest node = hashing::leaf_hash(vw, updated.data, updated.causal);
            for (unsigned level = 0; level < d_hc; ++level) {
                if ((vw >> level) & 1) {
                    node = hashing::node_hash(sb[level], node);
                } else {
                    node = hashing::node_hash(node, sb[level]);
                }
            }
            sb += d_hc;
            t_prev = hashing::extend_transcript(t_prev, t, c, node);
        }
        replay_seconds.push_back(seconds_since(start));
        replay_compressions = blake3::compression_count() - c0;
        if (t_prev != t_k_out) {
            throw Error("hash replay diverged from the measured run");
        }
    }
    if (replay_compressions != loop_compressions) {
        throw Error("hash replay compression count " +
                    std::to_string(replay_compressions) + " != full loop " +
                    std::to_string(loop_compressions));
    }
    rep.compressions_per_step = loop_compressions / k;
    rep.hash_fraction = median(replay_seconds) / median(loop_seconds);
    return rep;
}

std::vector<StepBenchReport> bench_steps(const std::vector<uint8_t>& d_hc_list,
                                         uint64_t rho, uint16_t d, int reps,
                                         uint64_t steps, const Digest& seed)
{
    std::vector<StepBenchReport> out;
    for (uint8_t d_hc : d_hc_list) {
        out.push_back(bench_steps_single(d_hc, rho, d, reps, steps, seed));
    }
    return out;
}

double bench_pointer_chase_ns(size_t arena_bytes, uint64_t steps, uint64_t seed)
{
    const size_t slots = arena_bytes / sizeof(uint64_t);
    if (slots < 2) throw Error("arena too small for a pointer chase");
    std::vector<uint64_t> perm(slots);
    for (size_t i = 0; i < slots; ++i) perm[i] = i;
    // Single-cycle (Sattolo) shuffle: every load depends on the previous one
    // and the cycle covers the whole arena.
    std::mt19937_64 rng(seed);
    for (size_t i = slots - 1; i >= 1; --i) {
        const size_t j = rng() % i; // j in [0, i)
        std::swap(perm[i], perm[j]);
    }

    const bool pinned = pin_to_one_cpu();
    (void)pinned;
    uint64_t p = 0;
    const uint64_t warmup = std::min<uint64_t>(steps, slots);
    for (uint64_t i = 0; i < warmup; ++i) p = perm[p];

    const auto start = Clock::now();
    for (uint64_t i = 0; i < steps; ++i) {
        p = perm[p];
        asm volatile("" : "+r"(p)); // keep the dependency chain live
    }
    const double elapsed = seconds_since(start);
    return elapsed * 1e9 / static_cast<double>(steps);
}

double bench_init_seconds(uint8_t d_hc, const Digest& seed)
{
    const auto t0 = Clock::now();
    InitResult init = init_arena(seed, d_hc);
    (void)init.r0;
    return seconds_since(t0);
}

} // namespace posme::bench
