#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "posme/digest.hpp"

namespace posme::hashing {

// Every derivation used by the protocol, with bit-exact input framing.
// Framing rules (see FORMATS.md): domain labels are raw ASCII from the
// prefix-free set {"init","causal","addr","write","leaf","node","rootleaf",
// "pad"}; integers are 8-byte little-endian; digests are raw 32 bytes;
// variable-length byte strings are 8-byte LE length followed by the bytes.
// All functions are pure and safe to call concurrently.

/// H("init" || seed || i [|| parent]). parent must be absent iff i == 0.
Digest init_data_digest(const Digest& seed, uint64_t i, const std::optional<Digest>& parent);

/// H("causal" || seed || i [|| parent]).
Digest init_causal_digest(const Digest& seed, uint64_t i, const std::optional<Digest>& parent);

/// Low d_hc bits of the LE64 integer formed from bytes 0..8 of
/// H("addr" || cursor || j). Rejects d_hc > 63 or d_hc == 0.
uint64_t derive_read_coord(const Digest& cursor, uint64_t j, unsigned d_hc);

/// As derive_read_coord with label "write" and no index field.
uint64_t derive_write_coord(const Digest& cursor, unsigned d_hc);

/// H(c || d_j || h_j) — cursor re-key after a read.
Digest chain_cursor(const Digest& c, const Digest& d_j, const Digest& h_j);

/// H(old_data || c || old_causal) — the written block's new data value.
Digest bind_data(const Digest& old_data, const Digest& c, const Digest& old_causal);

/// H(old_causal || c || t) — the written block's new causal value.
Digest bind_causal(const Digest& old_causal, const Digest& c, uint64_t t);

/// H(T_prev || t || c || r_t).
Digest extend_transcript(const Digest& t_prev, uint64_t t, const Digest& c, const Digest& r_t);

/// H(seed || N || r_0).
Digest initial_transcript(const Digest& seed, uint64_t n, const Digest& r0);

/// H(len(task_id) || task_id || len(nonce) || nonce).
Digest derive_seed(std::span<const uint8_t> task_id, std::span<const uint8_t> nonce);

/// H(T_K || C).
Digest fiat_shamir_sigma(const Digest& t_k, const Digest& c);

/// ((LE64 of H(sigma || i)[0..8]) mod K) + 1, in [1, K]. Rejects K == 0.
uint64_t fiat_shamir_step(const Digest& sigma, uint64_t i, uint64_t k);

// Merkle framings.
Digest leaf_hash(uint64_t v, const Digest& data, const Digest& causal);
Digest node_hash(const Digest& left, const Digest& right);
Digest rootleaf_hash(uint64_t t, const Digest& r_t);
Digest pad_hash(uint64_t index);

/// Number of H invocations since the last reset. Process-wide.
uint64_t hash_call_count();
void reset_hash_call_count();

} // namespace posme::hashing
