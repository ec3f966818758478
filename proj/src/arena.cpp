#include "posme/arena.hpp"

#include "posme/hashing.hpp"

namespace posme {

Arena init_arena_blocks(const Digest& seed, uint8_t d_hc)
{
    if (d_hc < 1 || d_hc > 32) {
        throw Error("d_hc must be in [1, 32], got " + std::to_string(d_hc));
    }
    Arena a;
    a.d_hc = d_hc;
    const uint64_t n = uint64_t{1} << d_hc;
    a.blocks.resize(n);
    a.blocks[0].data = hashing::init_data_digest(seed, 0, std::nullopt);
    a.blocks[0].causal = hashing::init_causal_digest(seed, 0, std::nullopt);
    for (uint64_t i = 1; i < n; ++i) {
        const Block& parent = a.blocks[skip_parent(i)];
        a.blocks[i].data = hashing::init_data_digest(seed, i, parent.data);
        a.blocks[i].causal = hashing::init_causal_digest(seed, i, parent.causal);
    }
    return a;
}

Block init_block(const Digest& seed, uint64_t v)
{
    // Ancestry from v down to vertex 0, then hash forward.
    uint64_t chain[65];
    int len = 0;
    for (uint64_t u = v; u != 0; u >>= 1) chain[len++] = u;
    Block b;
    b.data = hashing::init_data_digest(seed, 0, std::nullopt);
    b.causal = hashing::init_causal_digest(seed, 0, std::nullopt);
    for (int i = len - 1; i >= 0; --i) {
        b.data = hashing::init_data_digest(seed, chain[i], b.data);
        b.causal = hashing::init_causal_digest(seed, chain[i], b.causal);
    }
    return b;
}

} // namespace posme
