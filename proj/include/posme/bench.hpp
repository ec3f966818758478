#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "posme/engine.hpp"

namespace posme::bench {

struct StepBenchReport {
    uint64_t arena_bytes = 0;
    uint8_t d_hc = 0;
    uint64_t steps = 0; // steps actually timed
    uint16_t reads_per_step = 0;
    int reps = 0;
    double ns_per_step = 0;    // median over reps
    double hash_fraction = 0;  // hash-only replay time / full loop time
    double init_seconds = 0;   // arena init + commitment build
    uint64_t compressions_per_step = 0;
    std::string machine;
    std::string timestamp;
    bool pinned = false;
    Digest final_transcript; // outputs are timing-independent
};

/// Measures the step loop at one arena size. The hash fraction comes from a
/// separate replay that re-executes exactly the recorded hash calls with the
/// recorded inputs (read values, pre-write blocks, path siblings) and touches
/// no arena-sized state; inline timers at nanosecond granularity would
/// distort the quantity instead. Equal compression counts between loop and
/// replay are asserted. `steps` caps the timed loop (0 means rho * N, which
/// at production sizes needs a correspondingly large recording buffer).
StepBenchReport bench_steps_single(uint8_t d_hc, uint64_t rho, uint16_t d, int reps,
                                   uint64_t steps, const Digest& seed);

std::vector<StepBenchReport> bench_steps(const std::vector<uint8_t>& d_hc_list,
                                         uint64_t rho, uint16_t d, int reps,
                                         uint64_t steps, const Digest& seed);

/// Serialized dependent-load latency: a single random permutation cycle over
/// arena_bytes/8 slots, chased for `steps` loads.
double bench_pointer_chase_ns(size_t arena_bytes, uint64_t steps, uint64_t seed);

/// Wall seconds for deterministic initialization (arena + commitment).
double bench_init_seconds(uint8_t d_hc, const Digest& seed);

std::string machine_descriptor();

} // namespace posme::bench
