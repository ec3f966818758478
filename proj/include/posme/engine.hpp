#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "posme/arena.hpp"
#include "posme/merkle.hpp"
#include "posme/params.hpp"

namespace posme {

/// The address trace of one step.
struct StepRecord {
    uint64_t t = 0;
    std::span<const uint64_t> reads;
    uint64_t write = 0;
};

/// One write-log entry: everything needed to replay or undo step t's write.
struct WriteLogEntry {
    uint64_t t = 0;
    uint64_t write = 0;
    Block old_block;
    Digest cursor; // final cursor of step t
    Block new_block;
};

/// Per-vertex write history in CSR form: for vertex v, the ascending steps
/// that wrote v are steps[offsets[v] .. offsets[v+1]).
struct WriteIndex {
    std::vector<uint64_t> offsets; // N + 1
    std::vector<uint64_t> steps;   // K

    bool empty() const { return offsets.empty(); }

    /// Largest step w < t that wrote v, or nullopt (initialization state).
    std::optional<uint64_t> last_write_before(uint64_t v, uint64_t t) const;
};

WriteIndex build_write_index(std::span<const uint64_t> write_coords, uint64_t arena_blocks);

/// Complete execution record of a run.
struct RunLog {
    Params params; // challenges/recursion_depth carry defaults; gen uses d_hc, steps, reads_per_step
    Digest seed;
    std::vector<Digest> roots;       // r_0 .. r_K
    std::vector<Digest> transcripts; // T_0 .. T_K
    bool lean = false;

    // Step records and write log, flattened. Empty in lean mode.
    std::vector<uint64_t> read_coords;  // K * d
    std::vector<uint64_t> write_coords; // K
    std::vector<Block> old_blocks;      // K
    std::vector<Digest> cursors;        // K
    std::vector<Block> new_blocks;      // K

    WriteIndex write_index; // built once after gen (full retention)

    const Digest& final_transcript() const { return transcripts.back(); }
    const Digest& final_root() const { return roots.back(); }
    bool has_step_records() const { return params.steps == 0 || !write_coords.empty(); }

    StepRecord step_record(uint64_t t) const; // t in [1, K]
    WriteLogEntry write_log_entry(uint64_t t) const;
};

/// Scratch for the hot step loop; reused across steps to keep the loop
/// allocation-free.
struct StepScratch {
    std::vector<uint64_t> reads;
    uint64_t write = 0;
    Block old_block;
    Block new_block;
    Digest cursor;
    Digest root;
    Digest transcript;
};

/// Executes step t against the arena and tree. T_prev is the transcript after
/// step t-1. The d reads are issued strictly in order; each address is
/// derived from the cursor produced by the previous read.
void step_into(uint64_t t, Arena& arena, MerkleTree& tree, const Digest& t_prev,
               uint16_t d, StepScratch& out);

struct InitResult {
    Arena arena;
    MerkleTree tree;
    Digest r0;
    Digest t0;
};

/// Deterministic arena initialization plus the initial commitment and
/// transcript.
InitResult init_arena(const Digest& seed, uint8_t d_hc);

enum class Retention {
    full, // keep step records and write log
    lean, // keep only roots and transcripts; the prover re-derives the rest
};

struct GenResult {
    RunLog log;
    Arena arena;
    MerkleTree tree;
};

using StepObserver = std::function<void(uint64_t t, const StepScratch&)>;

/// Runs init plus K steps. Params are taken structurally (validate
/// separately for strict/toy policy). The optional observer sees every step;
/// it must not mutate anything the engine owns.
GenResult gen(const Digest& seed, const Params& params, Retention retention = Retention::full,
              const StepObserver& observer = nullptr);

/// Largest step w < t whose write coordinate is v, or nullopt when v was
/// never written before t (initialization state).
std::optional<uint64_t> last_write_before(const RunLog& log, uint64_t v, uint64_t t);

} // namespace posme
