#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "posme/arena.hpp"
#include "posme/digest.hpp"

namespace posme {

/// Authentication path: sibling digests bottom-up.
struct MerklePath {
    uint64_t leaf_index = 0;
    std::vector<Digest> siblings;

    bool operator==(const MerklePath&) const = default;
};

/// Dense binary Merkle tree over a power-of-two number of leaf hashes, heap
/// layout, with O(log N) leaf updates.
class MerkleTree {
public:
    MerkleTree() = default;

    /// Builds internal levels over the given leaf hashes (count must be a
    /// power of two, >= 1). Large trees hash levels in parallel.
    static MerkleTree from_leaf_hashes(std::vector<Digest> leaves);

    uint64_t leaf_count() const { return leaf_count_; }
    unsigned depth() const { return depth_; }
    const Digest& root() const { return nodes_[1]; }
    const Digest& leaf_hash(uint64_t index) const { return nodes_[leaf_count_ + index]; }

    /// Replaces one leaf hash and recomputes its root path. Returns the new
    /// root. Only the path nodes change.
    Digest update_leaf_hash(uint64_t index, const Digest& new_leaf);

    MerklePath open(uint64_t index) const;

    /// Recomputes every internal node from the leaves and checks it against
    /// the stored value. Test support.
    bool audit() const;

private:
    uint64_t leaf_count_ = 0;
    unsigned depth_ = 0;
    std::vector<Digest> nodes_; // nodes_[1] = root; leaves at [leaf_count_, 2*leaf_count_)
};

/// Arena commitment: leaf(v) = H over (v, data, causal).
MerkleTree build_tree(const Arena& arena);

/// Overwrite vertex v's committed block. Returns the new root.
Digest update_leaf(MerkleTree& tree, uint64_t v, const Block& block);

MerklePath open_block(const MerkleTree& tree, uint64_t v);

/// True iff the path authenticates (v, block) under root.
bool verify_path(const Digest& root, uint64_t v, const Block& block, const MerklePath& path);

/// Root-from-path arithmetic: the root obtained by hashing leaf_hash up
/// through the siblings. Shared by verify_path and the post-write root
/// recomputation.
Digest root_from_path(uint64_t index, const Digest& leaf_hash,
                      std::span<const Digest> siblings);

/// Commitment to the root sequence r_0..r_K: leaf t binds (t, r_t); the tree
/// is padded to the next power of two with position-bound padding leaves.
struct RootCommitment {
    MerkleTree tree;
    uint64_t root_count = 0; // K + 1

    const Digest& commitment() const { return tree.root(); }
    MerklePath open_root(uint64_t t) const { return tree.open(t); }
};

RootCommitment commit_roots(std::span<const Digest> roots);

bool verify_root(const Digest& commitment, uint64_t t, const Digest& r_t,
                 const MerklePath& path);

/// Standalone path encoding: coord (8-byte LE), sibling count (2-byte LE),
/// siblings bottom-up, raw 32 bytes each.
void serialize_path(const MerklePath& path, std::vector<uint8_t>& out);
MerklePath deserialize_path(std::span<const uint8_t> in, size_t& offset);

} // namespace posme
