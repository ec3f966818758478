#include "posme/prover.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "posme/hashing.hpp"

namespace posme {
namespace {

// Openings captured while the replay is paused at one step.
struct CachedStep {
    Digest t_prev;
    std::vector<ReadOpening> openings; // d reads then pre-write
};

// Replays the whole run, pausing at `wanted` steps to capture openings
// against the pre-state tree. Every captured path is checked against the
// stored root before it is accepted (prover self-audit). When
// `collect_writes` is non-null the per-step write coordinates are appended.
void replay_pass(const RunLog& log, const std::set<uint64_t>& wanted,
                 std::map<uint64_t, CachedStep>& cache,
                 std::vector<uint64_t>* collect_writes)
{
    const uint16_t d = log.params.reads_per_step;
    const unsigned d_hc = log.params.d_hc;

    InitResult init = init_arena(log.seed, log.params.d_hc);
    Arena& arena = init.arena;
    MerkleTree& tree = init.tree;
    if (init.r0 != log.roots[0] || init.t0 != log.transcripts[0]) {
        throw Error("corrupt run log: replay diverges at initialization");
    }

    Digest t_prev = init.t0;
    StepScratch s;
    for (uint64_t t = 1; t <= log.params.steps; ++t) {
        if (wanted.count(t) && !cache.count(t)) {
            // Capture before applying the write: walk the cursor chain to
            // learn this step's coordinates, open them, then apply.
            CachedStep cs;
            cs.t_prev = t_prev;
            Digest c = t_prev;
            std::vector<uint64_t> coords;
            coords.reserve(d + 1);
            for (uint16_t j = 0; j < d; ++j) {
                const uint64_t v = hashing::derive_read_coord(c, j, d_hc);
                coords.push_back(v);
                c = hashing::chain_cursor(c, arena[v].data, arena[v].causal);
            }
            coords.push_back(hashing::derive_write_coord(c, d_hc));
            for (uint64_t v : coords) {
                ReadOpening o;
                o.coord = v;
                o.block = arena[v];
                o.path = tree.open(v);
                if (!verify_path(log.roots[t - 1], v, o.block, o.path)) {
                    throw Error("prover self-audit failed at step " + std::to_string(t));
                }
                cs.openings.push_back(std::move(o));
            }
            cache.emplace(t, std::move(cs));
        }

        step_into(t, arena, tree, t_prev, d, s);
        if (s.root != log.roots[t] || s.transcript != log.transcripts[t]) {
            throw Error("corrupt run log: replay diverges at step " + std::to_string(t));
        }
        if (collect_writes) collect_writes->push_back(s.write);
        t_prev = s.transcript;
    }
}

// Writers of the step's d read blocks.
std::vector<uint64_t> writer_steps(const WriteIndex& idx, const CachedStep& cs,
                                   uint64_t step, uint16_t d)
{
    std::vector<uint64_t> out;
    for (uint16_t j = 0; j < d; ++j) {
        if (auto w = idx.last_write_before(cs.openings[j].coord, step)) {
            out.push_back(*w);
        }
    }
    return out;
}

StepWitness assemble_witness(const RootCommitment& rc, const RunLog& log,
                             const CachedStep& cs, uint64_t step)
{
    StepWitness w;
    w.t_prev = cs.t_prev;
    w.openings = cs.openings;
    w.root_pair.r_minus = log.roots[step - 1];
    w.root_pair.path_minus = rc.open_root(step - 1);
    w.root_pair.r_plus = log.roots[step];
    w.root_pair.path_plus = rc.open_root(step);
    return w;
}

ProvenanceNode make_node(const RunLog& log, const RootCommitment& rc,
                         const WriteIndex& idx,
                         const std::map<uint64_t, CachedStep>& cache, uint64_t vertex,
                         const Block& observed, uint64_t before_step, unsigned depth,
                         uint8_t r);

std::vector<ProvenanceNode> make_children(const RunLog& log, const RootCommitment& rc,
                                          const WriteIndex& idx,
                                          const std::map<uint64_t, CachedStep>& cache,
                                          const CachedStep& cs, uint64_t step,
                                          unsigned depth, uint8_t r)
{
    std::vector<ProvenanceNode> nodes;
    const uint16_t d = log.params.reads_per_step;
    nodes.reserve(d);
    for (uint16_t j = 0; j < d; ++j) {
        nodes.push_back(make_node(log, rc, idx, cache, cs.openings[j].coord,
                                  cs.openings[j].block, step, depth, r));
    }
    return nodes;
}

ProvenanceNode make_node(const RunLog& log, const RootCommitment& rc,
                         const WriteIndex& idx,
                         const std::map<uint64_t, CachedStep>& cache, uint64_t vertex,
                         const Block& observed, uint64_t before_step, unsigned depth,
                         uint8_t r)
{
    ProvenanceNode node;
    node.vertex = vertex;
    node.observed = observed;
    auto w = idx.last_write_before(vertex, before_step);
    if (!w) return node; // InitOrigin: seed-recomputable, no material
    WriterStep ws;
    ws.step = *w;
    const CachedStep& cs = cache.at(*w);
    ws.witness = assemble_witness(rc, log, cs, *w);
    if (depth < unsigned{r} - 1) {
        ws.children = make_children(log, rc, idx, cache, cs, *w, depth + 1, r);
    }
    node.writer = std::move(ws);
    return node;
}

} // namespace

std::vector<uint64_t> derive_challenges(const Digest& t_k, const Digest& c, uint64_t k,
                                        uint16_t q)
{
    std::vector<uint64_t> out;
    out.reserve(q);
    if (q == 0) return out;
    const Digest sigma = hashing::fiat_shamir_sigma(t_k, c);
    for (uint16_t i = 1; i <= q; ++i) {
        out.push_back(hashing::fiat_shamir_step(sigma, i, k));
    }
    return out;
}

std::vector<uint64_t> collect_required_steps(std::span<const uint64_t> challenges,
                                             const RunLog& log, uint8_t r)
{
    if (!log.has_step_records()) {
        throw Error("collect_required_steps needs step records (full-retention run)");
    }
    std::set<uint64_t> all;
    std::set<uint64_t> level(challenges.begin(), challenges.end());
    const uint16_t d = log.params.reads_per_step;
    for (unsigned depth = 0; depth + 1 < r && !level.empty(); ++depth) {
        all.insert(level.begin(), level.end());
        std::set<uint64_t> next;
        for (uint64_t s : level) {
            const StepRecord rec = log.step_record(s);
            for (uint16_t j = 0; j < d; ++j) {
                if (auto w = last_write_before(log, rec.reads[j], s)) next.insert(*w);
            }
        }
        level = std::move(next);
    }
    all.insert(level.begin(), level.end());
    return {all.begin(), all.end()};
}

Proof prove(const RunLog& log, uint16_t q, uint8_t r)
{
    if (r < 1) throw Error("recursion depth must be at least 1");
    if (log.params.steps == 0 && q > 0) {
        throw Error("cannot challenge an empty run");
    }
    if (log.roots.size() != log.params.steps + 1 ||
        log.transcripts.size() != log.params.steps + 1) {
        throw Error("run log is incomplete");
    }

    RootCommitment rc = commit_roots(log.roots);
    const Digest t_k = log.final_transcript();
    const std::vector<uint64_t> challenges =
        q == 0 ? std::vector<uint64_t>{}
               : derive_challenges(t_k, rc.commitment(), log.params.steps, q);

    std::map<uint64_t, CachedStep> cache;
    WriteIndex lean_index;
    const WriteIndex* idx = &log.write_index;

    if (!log.lean && log.has_step_records()) {
        const auto required = collect_required_steps(challenges, log, r);
        std::set<uint64_t> wanted(required.begin(), required.end());
        if (!wanted.empty()) replay_pass(log, wanted, cache, nullptr);
    } else if (log.params.steps > 0 && q > 0) {
        // Lean run: no stored step records. The first replay captures the
        // challenge-level openings and rebuilds the write index; each deeper
        // provenance level needs one more replay because its steps lie
        // earlier in time than the pauses that reveal them.
        std::set<uint64_t> level(challenges.begin(), challenges.end());
        std::vector<uint64_t> writes;
        writes.reserve(log.params.steps);
        replay_pass(log, level, cache, &writes);
        lean_index = build_write_index(writes, log.params.arena_blocks());
        idx = &lean_index;
        for (unsigned depth = 0; depth + 1 < r && !level.empty(); ++depth) {
            std::set<uint64_t> next;
            for (uint64_t s : level) {
                for (uint64_t w :
                     writer_steps(*idx, cache.at(s), s, log.params.reads_per_step)) {
                    next.insert(w);
                }
            }
            std::set<uint64_t> missing;
            for (uint64_t w : next) {
                if (!cache.count(w)) missing.insert(w);
            }
            if (!missing.empty()) replay_pass(log, missing, cache, nullptr);
            level = std::move(next);
        }
    }

    Proof proof;
    proof.params = log.params;
    proof.params.challenges = q;
    proof.params.recursion_depth = r;
    proof.t_k = t_k;
    proof.c = rc.commitment();
    proof.challenges.reserve(q);
    for (uint64_t s : challenges) {
        ChallengeWitness cw;
        const CachedStep& cs = cache.at(s);
        cw.witness = assemble_witness(rc, log, cs, s);
        if (r >= 2) {
            cw.provenance = make_children(log, rc, *idx, cache, cs, s, 1, r);
        }
        proof.challenges.push_back(std::move(cw));
    }
    return proof;
}

uint64_t blocks_per_challenge_bound(uint16_t d, uint8_t r)
{
    uint64_t total = 0;
    uint64_t level = 1;
    for (unsigned l = 0; l < r; ++l) {
        total += level * (uint64_t{d} + 1);
        level *= d;
    }
    return total;
}

uint64_t count_opened_blocks(const ChallengeWitness& cw)
{
    uint64_t blocks = cw.witness.openings.size();
    std::vector<const ProvenanceNode*> stack;
    for (const auto& n : cw.provenance) stack.push_back(&n);
    while (!stack.empty()) {
        const ProvenanceNode* n = stack.back();
        stack.pop_back();
        if (!n->writer) continue;
        blocks += n->writer->witness.openings.size();
        for (const auto& ch : n->writer->children) stack.push_back(&ch);
    }
    return blocks;
}

uint64_t proof_size_estimate(const Params& p)
{
    return uint64_t{p.challenges} *
           blocks_per_challenge_bound(p.reads_per_step, p.recursion_depth) *
           (64 + uint64_t{p.d_hc} * 32);
}

} // namespace posme
