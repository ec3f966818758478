#pragma once

#include <span>
#include <string>

#include "posme/prover.hpp"

namespace posme {

/// First-failure cause, named after the check that tripped.
enum class CheckId {
    ok,
    parse,             // malformed proof bytes
    params,            // proof parameters disagree with the caller's
    root_pair,         // r^- or r^+ not a member of C at the derived index
    pre_state,         // a read or pre-write opening fails against r^-
    read_coord,        // replayed read coordinate differs from the witnessed one
    write_coord,       // replayed write coordinate differs from the witnessed one
    post_state,        // recomputed post-write root differs from r^+
    provenance_init,   // observed block differs from the seed's skip chain
    provenance_writer, // writer replay fails to reproduce the observed block
};

const char* check_name(CheckId id);

struct VerifyReport {
    bool accepted = false;
    uint32_t failing_challenge = 0; // 1-based; 0 when not challenge-specific
    CheckId check = CheckId::ok;
    std::string detail;
};

/// Classical verification. Hostile input tolerated: malformed bytes yield a
/// parse rejection, never an exception. Allocates memory proportional to the
/// proof, never to the arena.
VerifyReport verify(std::span<const uint8_t> proof_bytes, const Digest& seed,
                    const Params& expected);

/// Structure-level entry point used by tests that tamper with parsed proofs.
VerifyReport verify(const Proof& proof, const Digest& seed, const Params& expected);

/// Closed-form H-invocation count for verifying a proof with no duplicate
/// work and no provenance branch terminating at the initialization state.
/// Matches the instrumented count exactly in that regime; initialization
/// terminals only ever cost less.
uint64_t verify_cost_estimate(const Params& p);

} // namespace posme
