#pragma once

#include <cstdint>
#include <vector>

#include "posme/digest.hpp"

namespace posme {

/// One arena cell: a (data, causal) digest pair.
struct Block {
    Digest data;
    Digest causal;

    bool operator==(const Block&) const = default;
};

/// Dense array of 2^d_hc blocks, indexed by vertex integer.
struct Arena {
    uint8_t d_hc = 0;
    std::vector<Block> blocks;

    uint64_t size() const { return blocks.size(); }
    const Block& operator[](uint64_t v) const { return blocks[v]; }
    Block& operator[](uint64_t v) { return blocks[v]; }
};

/// Skip-link parent: v >> 1. Vertex 0 has no parent; callers must not ask.
inline uint64_t skip_parent(uint64_t v) { return v >> 1; }

/// Deterministic skip-link initialization of the whole arena.
Arena init_arena_blocks(const Digest& seed, uint8_t d_hc);

/// Recompute a single vertex's initialization-state block from the seed by
/// walking its skip-link ancestry. Costs bit_length(v) + 1 hash calls per
/// field.
Block init_block(const Digest& seed, uint64_t v);

} // namespace posme
