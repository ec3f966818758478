#include "posme/merkle.hpp"

#include <bit>
#include <thread>

#include "posme/hashing.hpp"

namespace posme {
namespace {

// Chunked parallel index loop; falls back to inline execution for small
// ranges where thread startup would dominate.
template <typename F>
void parallel_for(uint64_t begin, uint64_t end, F&& fn)
{
    const uint64_t count = end - begin;
    unsigned workers = std::thread::hardware_concurrency();
    if (workers < 2 || count < (uint64_t{1} << 15)) {
        for (uint64_t i = begin; i < end; ++i) fn(i);
        return;
    }
    if (workers > 16) workers = 16;
    const uint64_t chunk = (count + workers - 1) / workers;
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        const uint64_t lo = begin + w * chunk;
        if (lo >= end) break;
        const uint64_t hi = std::min(end, lo + chunk);
        threads.emplace_back([lo, hi, &fn] {
            for (uint64_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : threads) t.join();
}

} // namespace

MerkleTree MerkleTree::from_leaf_hashes(std::vector<Digest> leaves)
{
    const uint64_t n = leaves.size();
    if (n == 0 || !std::has_single_bit(n)) {
        throw Error("leaf count must be a power of two, got " + std::to_string(n));
    }
    MerkleTree t;
    t.leaf_count_ = n;
    t.depth_ = static_cast<unsigned>(std::countr_zero(n));
    t.nodes_.resize(2 * n);
    std::copy(leaves.begin(), leaves.end(), t.nodes_.begin() + static_cast<ptrdiff_t>(n));
    for (uint64_t level = n / 2; level >= 1; level /= 2) {
        auto* nodes = t.nodes_.data();
        parallel_for(level, 2 * level, [nodes](uint64_t i) {
            nodes[i] = hashing::node_hash(nodes[2 * i], nodes[2 * i + 1]);
        });
        if (level == 1) break;
    }
    return t;
}

Digest MerkleTree::update_leaf_hash(uint64_t index, const Digest& new_leaf)
{
    if (index >= leaf_count_) {
        throw Error("leaf index " + std::to_string(index) + " out of range");
    }
    uint64_t i = leaf_count_ + index;
    nodes_[i] = new_leaf;
    while (i > 1) {
        i /= 2;
        nodes_[i] = hashing::node_hash(nodes_[2 * i], nodes_[2 * i + 1]);
    }
    return nodes_[1];
}

MerklePath MerkleTree::open(uint64_t index) const
{
    if (index >= leaf_count_) {
        throw Error("leaf index " + std::to_string(index) + " out of range");
    }
    MerklePath p;
    p.leaf_index = index;
    p.siblings.reserve(depth_);
    uint64_t i = leaf_count_ + index;
    while (i > 1) {
        p.siblings.push_back(nodes_[i ^ 1]);
        i /= 2;
    }
    return p;
}

bool MerkleTree::audit() const
{
    for (uint64_t i = leaf_count_ - 1; i >= 1; --i) {
        if (nodes_[i] != hashing::node_hash(nodes_[2 * i], nodes_[2 * i + 1])) return false;
    }
    return true;
}

MerkleTree build_tree(const Arena& arena)
{
    std::vector<Digest> leaves(arena.size());
    const Block* blocks = arena.blocks.data();
    Digest* out = leaves.data();
    parallel_for(0, arena.size(), [blocks, out](uint64_t v) {
        out[v] = hashing::leaf_hash(v, blocks[v].data, blocks[v].causal);
    });
    return MerkleTree::from_leaf_hashes(std::move(leaves));
}

Digest update_leaf(MerkleTree& tree, uint64_t v, const Block& block)
{
    return tree.update_leaf_hash(v, hashing::leaf_hash(v, block.data, block.causal));
}

MerklePath open_block(const MerkleTree& tree, uint64_t v) { return tree.open(v); }

Digest root_from_path(uint64_t index, const Digest& leaf_hash,
                      std::span<const Digest> siblings)
{
    Digest cur = leaf_hash;
    for (size_t level = 0; level < siblings.size(); ++level) {
        if ((index >> level) & 1) {
            cur = hashing::node_hash(siblings[level], cur);
        } else {
            cur = hashing::node_hash(cur, siblings[level]);
        }
    }
    return cur;
}

bool verify_path(const Digest& root, uint64_t v, const Block& block, const MerklePath& path)
{
    if (path.leaf_index != v) return false;
    if (path.siblings.size() > 63) return false;
    if (v >= (uint64_t{1} << path.siblings.size())) return false;
    Digest leaf = hashing::leaf_hash(v, block.data, block.causal);
    return root_from_path(v, leaf, path.siblings) == root;
}

RootCommitment commit_roots(std::span<const Digest> roots)
{
    if (roots.empty()) throw Error("root sequence is empty");
    uint64_t padded = std::bit_ceil(roots.size());
    std::vector<Digest> leaves(padded);
    for (uint64_t t = 0; t < roots.size(); ++t) {
        leaves[t] = hashing::rootleaf_hash(t, roots[t]);
    }
    for (uint64_t idx = roots.size(); idx < padded; ++idx) {
        leaves[idx] = hashing::pad_hash(idx);
    }
    RootCommitment rc;
    rc.root_count = roots.size();
    rc.tree = MerkleTree::from_leaf_hashes(std::move(leaves));
    return rc;
}

bool verify_root(const Digest& commitment, uint64_t t, const Digest& r_t,
                 const MerklePath& path)
{
    if (path.leaf_index != t) return false;
    if (path.siblings.size() > 63) return false;
    if (t >= (uint64_t{1} << path.siblings.size())) return false;
    Digest leaf = hashing::rootleaf_hash(t, r_t);
    return root_from_path(t, leaf, path.siblings) == commitment;
}

void serialize_path(const MerklePath& path, std::vector<uint8_t>& out)
{
    uint8_t le[8];
    store_le64(le, path.leaf_index);
    out.insert(out.end(), le, le + 8);
    const uint16_t count = static_cast<uint16_t>(path.siblings.size());
    out.push_back(static_cast<uint8_t>(count));
    out.push_back(static_cast<uint8_t>(count >> 8));
    for (const Digest& s : path.siblings) {
        out.insert(out.end(), s.bytes.begin(), s.bytes.end());
    }
}

MerklePath deserialize_path(std::span<const uint8_t> in, size_t& offset)
{
    if (in.size() - offset < 10) throw ParseError("truncated merkle path");
    MerklePath p;
    p.leaf_index = load_le64(in.data() + offset);
    offset += 8;
    uint16_t count = static_cast<uint16_t>(in[offset] | (in[offset + 1] << 8));
    offset += 2;
    if (count > 63) throw ParseError("merkle path too deep");
    if (in.size() - offset < size_t{count} * 32) throw ParseError("truncated merkle path");
    p.siblings.resize(count);
    for (uint16_t i = 0; i < count; ++i) {
        std::copy_n(in.data() + offset, 32, p.siblings[i].bytes.begin());
        offset += 32;
    }
    return p;
}

} // namespace posme
