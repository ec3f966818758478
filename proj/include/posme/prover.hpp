#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "posme/engine.hpp"
#include "posme/merkle.hpp"

namespace posme {

/// One opened block against a step's pre-state root.
struct ReadOpening {
    uint64_t coord = 0;
    Block block;
    MerklePath path;

    bool operator==(const ReadOpening&) const = default;
};

/// Membership of the step's adjacent roots (r_{s-1}, r_s) in the root-sequence
/// commitment C.
struct RootPairOpening {
    Digest r_minus;
    MerklePath path_minus;
    Digest r_plus;
    MerklePath path_plus;

    bool operator==(const RootPairOpening&) const = default;
};

/// Everything needed to replay one step: the prior transcript, the d read
/// openings followed by the pre-write opening of v_w (all against r_{s-1}),
/// and the root pair in C. The post-state root is recomputed from the
/// pre-write path's siblings, which an incremental leaf update leaves
/// untouched, so no separate post opening is carried.
struct StepWitness {
    Digest t_prev;
    std::vector<ReadOpening> openings; // size d+1: reads in order, then pre-write
    RootPairOpening root_pair;

    bool operator==(const StepWitness&) const = default;
};

struct ProvenanceNode;

/// A read block's writer step, replayable from its own witness. Children
/// cover the writer's d reads and are present only above the recursion floor.
struct WriterStep {
    uint64_t step = 0;
    StepWitness witness;
    std::vector<ProvenanceNode> children;

    bool operator==(const WriterStep&) const = default;
};

/// Lineage of one consumed block: either produced by a prior step's write, or
/// still in its seed-derivable initialization state (no witness material; the
/// verifier recomputes the skip chain).
struct ProvenanceNode {
    uint64_t vertex = 0;
    Block observed;
    std::optional<WriterStep> writer; // nullopt = InitOrigin

    bool operator==(const ProvenanceNode&) const = default;
};

struct ChallengeWitness {
    StepWitness witness;
    std::vector<ProvenanceNode> provenance; // d nodes when R >= 2, else empty

    bool operator==(const ChallengeWitness&) const = default;
};

struct Proof {
    Params params;
    Digest t_k;
    Digest c;
    std::vector<ChallengeWitness> challenges;

    bool operator==(const Proof&) const = default;
};

/// Fiat-Shamir challenge steps in [1, K]; duplicates permitted.
std::vector<uint64_t> derive_challenges(const Digest& t_k, const Digest& c, uint64_t k,
                                        uint16_t q);

/// Ascending, deduplicated closure of the challenge steps under
/// writer-of-read-block expansion to depth R. Requires step records.
std::vector<uint64_t> collect_required_steps(std::span<const uint64_t> challenges,
                                             const RunLog& log, uint8_t r);

/// Generates the proof by deterministic replay from the seed. Lean runs are
/// replayed once per provenance level; full runs once.
Proof prove(const RunLog& log, uint16_t q, uint8_t r);

std::vector<uint8_t> serialize_proof(const Proof& proof);
Proof deserialize_proof(std::span<const uint8_t> bytes);

/// Parse variant that also returns the challenge steps derived from the
/// proof's own (T_K, C) during parsing, so the verifier re-derives exactly
/// once per proof.
Proof deserialize_proof(std::span<const uint8_t> bytes,
                        std::vector<uint64_t>& challenge_steps_out);

/// B: the per-challenge opened-block ceiling, sum over levels of d^l (d+1).
uint64_t blocks_per_challenge_bound(uint16_t d, uint8_t r);

/// Opened blocks actually carried by one challenge (d+1 per witness present).
uint64_t count_opened_blocks(const ChallengeWitness& cw);

/// Serialized-size estimate Q * B * (64 + d_hc * 32) bytes.
uint64_t proof_size_estimate(const Params& p);

} // namespace posme
