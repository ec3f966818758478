#include "posme/engine.hpp"

#include <algorithm>

#include "posme/hashing.hpp"

namespace posme {

StepRecord RunLog::step_record(uint64_t t) const
{
    if (t < 1 || t > params.steps || !has_step_records()) {
        throw Error("no step record for step " + std::to_string(t));
    }
    const uint16_t d = params.reads_per_step;
    StepRecord r;
    r.t = t;
    r.reads = std::span<const uint64_t>(read_coords.data() + (t - 1) * d, d);
    r.write = write_coords[t - 1];
    return r;
}

WriteLogEntry RunLog::write_log_entry(uint64_t t) const
{
    if (t < 1 || t > params.steps || !has_step_records()) {
        throw Error("no write log entry for step " + std::to_string(t));
    }
    WriteLogEntry e;
    e.t = t;
    e.write = write_coords[t - 1];
    e.old_block = old_blocks[t - 1];
    e.cursor = cursors[t - 1];
    e.new_block = new_blocks[t - 1];
    return e;
}

void step_into(uint64_t t, Arena& arena, MerkleTree& tree, const Digest& t_prev,
               uint16_t d, StepScratch& out)
{
    const unsigned d_hc = arena.d_hc;
    out.reads.resize(d);
    Digest c = t_prev;
    for (uint16_t j = 0; j < d; ++j) {
        // Address depends on the cursor, which depends on the previous read's
        // value: the chain is inherently sequential.
        const uint64_t v = hashing::derive_read_coord(c, j, d_hc);
        out.reads[j] = v;
        const Block& b = arena[v];
        c = hashing::chain_cursor(c, b.data, b.causal);
    }
    const uint64_t vw = hashing::derive_write_coord(c, d_hc);
    out.write = vw;
    out.old_block = arena[vw];
    out.new_block.data = hashing::bind_data(out.old_block.data, c, out.old_block.causal);
    out.new_block.causal = hashing::bind_causal(out.old_block.causal, c, t);
    arena[vw] = out.new_block;
    out.cursor = c;
    out.root = update_leaf(tree, vw, out.new_block);
    out.transcript = hashing::extend_transcript(t_prev, t, c, out.root);
}

InitResult init_arena(const Digest& seed, uint8_t d_hc)
{
    InitResult r;
    r.arena = init_arena_blocks(seed, d_hc);
    r.tree = build_tree(r.arena);
    r.r0 = r.tree.root();
    r.t0 = hashing::initial_transcript(seed, r.arena.size(), r.r0);
    return r;
}

GenResult gen(const Digest& seed, const Params& params, Retention retention,
              const StepObserver& observer)
{
    const uint64_t k = params.steps;
    const uint16_t d = params.reads_per_step;

    InitResult init = init_arena(seed, params.d_hc);

    GenResult result;
    result.log.params = params;
    result.log.seed = seed;
    result.log.lean = (retention == Retention::lean);
    result.log.roots.reserve(k + 1);
    result.log.transcripts.reserve(k + 1);
    result.log.roots.push_back(init.r0);
    result.log.transcripts.push_back(init.t0);

    const bool full = (retention == Retention::full);
    if (full) {
        result.log.read_coords.reserve(k * d);
        result.log.write_coords.reserve(k);
        result.log.old_blocks.reserve(k);
        result.log.cursors.reserve(k);
        result.log.new_blocks.reserve(k);
    }

    StepScratch s;
    Digest t_prev = init.t0;
    for (uint64_t t = 1; t <= k; ++t) {
        step_into(t, init.arena, init.tree, t_prev, d, s);
        result.log.roots.push_back(s.root);
        result.log.transcripts.push_back(s.transcript);
        if (full) {
            result.log.read_coords.insert(result.log.read_coords.end(), s.reads.begin(),
                                          s.reads.end());
            result.log.write_coords.push_back(s.write);
            result.log.old_blocks.push_back(s.old_block);
            result.log.cursors.push_back(s.cursor);
            result.log.new_blocks.push_back(s.new_block);
        }
        if (observer) observer(t, s);
        t_prev = s.transcript;
    }

    if (full) {
        result.log.write_index = build_write_index(result.log.write_coords,
                                                   params.arena_blocks());
    }
    result.arena = std::move(init.arena);
    result.tree = std::move(init.tree);
    return result;
}

WriteIndex build_write_index(std::span<const uint64_t> write_coords, uint64_t arena_blocks)
{
    WriteIndex idx;
    idx.offsets.assign(arena_blocks + 1, 0);
    for (uint64_t v : write_coords) ++idx.offsets[v + 1];
    for (uint64_t v = 1; v <= arena_blocks; ++v) idx.offsets[v] += idx.offsets[v - 1];
    idx.steps.resize(write_coords.size());
    std::vector<uint64_t> cursor(idx.offsets.begin(), idx.offsets.end() - 1);
    for (uint64_t t = 1; t <= write_coords.size(); ++t) {
        idx.steps[cursor[write_coords[t - 1]]++] = t;
    }
    return idx;
}

std::optional<uint64_t> WriteIndex::last_write_before(uint64_t v, uint64_t t) const
{
    if (empty()) throw Error("write index not built");
    if (v + 1 >= offsets.size()) {
        throw Error("vertex " + std::to_string(v) + " out of range");
    }
    auto begin = steps.begin();
    auto it = std::lower_bound(begin + offsets[v], begin + offsets[v + 1], t);
    if (it == begin + offsets[v]) return std::nullopt;
    return *(it - 1);
}

std::optional<uint64_t> last_write_before(const RunLog& log, uint64_t v, uint64_t t)
{
    if (v >= log.params.arena_blocks()) {
        throw Error("vertex " + std::to_string(v) + " out of range");
    }
    return log.write_index.last_write_before(v, t);
}

} // namespace posme
