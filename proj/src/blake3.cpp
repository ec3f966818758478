// Portable BLAKE3, hash-only mode (no keying, no derive-key, 32-byte output).
// Validated against vectors produced by the official implementation; see
// tests/data/oracle_vectors.json.

#include "posme/blake3.hpp"

#include <atomic>
#include <cstring>

namespace posme::blake3 {
namespace {

constexpr uint32_t IV[8] = {0x6A09E667, 0xBB67AE85, 0x3C6EF372, 0xA54FF53A,
                            0x510E527F, 0x9B05688C, 0x1F83D9AB, 0x5BE0CD19};

constexpr int MSG_PERM[16] = {2, 6, 3, 10, 7, 0, 4, 13, 1, 11, 12, 5, 9, 14, 15, 8};

constexpr uint32_t CHUNK_START = 1u << 0;
constexpr uint32_t CHUNK_END = 1u << 1;
constexpr uint32_t PARENT = 1u << 2;
constexpr uint32_t ROOT = 1u << 3;

constexpr size_t BLOCK_LEN = 64;
constexpr size_t CHUNK_LEN = 1024;

std::atomic<uint64_t> g_compressions{0};

inline uint32_t rotr32(uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

inline void g(uint32_t* v, int a, int b, int c, int d, uint32_t mx, uint32_t my)
{
    v[a] = v[a] + v[b] + mx;
    v[d] = rotr32(v[d] ^ v[a], 16);
    v[c] = v[c] + v[d];
    v[b] = rotr32(v[b] ^ v[c], 12);
    v[a] = v[a] + v[b] + my;
    v[d] = rotr32(v[d] ^ v[a], 8);
    v[c] = v[c] + v[d];
    v[b] = rotr32(v[b] ^ v[c], 7);
}

inline void round_fn(uint32_t* v, const uint32_t* m)
{
    g(v, 0, 4, 8, 12, m[0], m[1]);
    g(v, 1, 5, 9, 13, m[2], m[3]);
    g(v, 2, 6, 10, 14, m[4], m[5]);
    g(v, 3, 7, 11, 15, m[6], m[7]);
    g(v, 0, 5, 10, 15, m[8], m[9]);
    g(v, 1, 6, 11, 12, m[10], m[11]);
    g(v, 2, 7, 8, 13, m[12], m[13]);
    g(v, 3, 4, 9, 14, m[14], m[15]);
}

void compress(const uint32_t cv[8], const uint32_t block_words[16], uint64_t counter,
              uint32_t block_len, uint32_t flags, uint32_t out[16])
{
    g_compressions.fetch_add(1, std::memory_order_relaxed);

    uint32_t v[16] = {
        cv[0], cv[1], cv[2], cv[3], cv[4], cv[5], cv[6], cv[7],
        IV[0], IV[1], IV[2], IV[3],
        static_cast<uint32_t>(counter), static_cast<uint32_t>(counter >> 32),
        block_len, flags,
    };
    uint32_t m[16];
    std::memcpy(m, block_words, sizeof(m));

    for (int round = 0; round < 7; ++round) {
        round_fn(v, m);
        if (round < 6) {
            uint32_t p[16];
            for (int i = 0; i < 16; ++i) p[i] = m[MSG_PERM[i]];
            std::memcpy(m, p, sizeof(m));
        }
    }
    for (int i = 0; i < 8; ++i) {
        out[i] = v[i] ^ v[i + 8];
        out[i + 8] = v[i + 8] ^ cv[i];
    }
}

inline void words_from_le(const uint8_t* bytes, uint32_t* words, int n_words)
{
    for (int i = 0; i < n_words; ++i) {
        words[i] = static_cast<uint32_t>(bytes[4 * i]) |
                   (static_cast<uint32_t>(bytes[4 * i + 1]) << 8) |
                   (static_cast<uint32_t>(bytes[4 * i + 2]) << 16) |
                   (static_cast<uint32_t>(bytes[4 * i + 3]) << 24);
    }
}

inline void words_to_le(const uint32_t* words, uint8_t* bytes, int n_words)
{
    for (int i = 0; i < n_words; ++i) {
        bytes[4 * i] = static_cast<uint8_t>(words[i]);
        bytes[4 * i + 1] = static_cast<uint8_t>(words[i] >> 8);
        bytes[4 * i + 2] = static_cast<uint8_t>(words[i] >> 16);
        bytes[4 * i + 3] = static_cast<uint8_t>(words[i] >> 24);
    }
}

// Deferred final compression: lets the ROOT flag be decided after the fact.
struct Output {
    uint32_t cv[8];
    uint32_t block_words[16];
    uint64_t counter;
    uint32_t block_len;
    uint32_t flags;

    void chaining_value(uint32_t out_cv[8]) const
    {
        uint32_t wide[16];
        compress(cv, block_words, counter, block_len, flags, wide);
        std::memcpy(out_cv, wide, 8 * sizeof(uint32_t));
    }

    void root_bytes(uint8_t out[32]) const
    {
        uint32_t wide[16];
        compress(cv, block_words, 0, block_len, flags | ROOT, wide);
        words_to_le(wide, out, 8);
    }
};

Output parent_output(const uint32_t left[8], const uint32_t right[8])
{
    Output o{};
    std::memcpy(o.cv, IV, sizeof(o.cv));
    std::memcpy(o.block_words, left, 8 * sizeof(uint32_t));
    std::memcpy(o.block_words + 8, right, 8 * sizeof(uint32_t));
    o.counter = 0;
    o.block_len = BLOCK_LEN;
    o.flags = PARENT;
    return o;
}

void parent_cv(const uint32_t left[8], const uint32_t right[8], uint32_t out_cv[8])
{
    parent_output(left, right).chaining_value(out_cv);
}

} // namespace

Hasher::Hasher()
    : chunk_counter_(0), block_len_(0), blocks_compressed_(0), cv_stack_len_(0)
{
    std::memcpy(cv_, IV, sizeof(cv_));
    std::memset(block_, 0, sizeof(block_));
}

void Hasher::update(const uint8_t* data, size_t len)
{
    while (len > 0) {
        size_t chunk_len = blocks_compressed_ * BLOCK_LEN + block_len_;
        if (chunk_len == CHUNK_LEN) {
            // Finalize the full chunk and fold its CV into the stack.
            Output o{};
            std::memcpy(o.cv, cv_, sizeof(cv_));
            words_from_le(block_, o.block_words, 16);
            o.counter = chunk_counter_;
            o.block_len = BLOCK_LEN;
            o.flags = (blocks_compressed_ == 0 ? CHUNK_START : 0) | CHUNK_END;
            uint32_t chunk_cv[8];
            o.chaining_value(chunk_cv);

            uint64_t total_chunks = chunk_counter_ + 1;
            while ((total_chunks & 1) == 0) {
                --cv_stack_len_;
                uint32_t merged[8];
                parent_cv(cv_stack_[cv_stack_len_], chunk_cv, merged);
                std::memcpy(chunk_cv, merged, sizeof(merged));
                total_chunks >>= 1;
            }
            std::memcpy(cv_stack_[cv_stack_len_++], chunk_cv, sizeof(chunk_cv));

            chunk_counter_ += 1;
            std::memcpy(cv_, IV, sizeof(cv_));
            block_len_ = 0;
            blocks_compressed_ = 0;
            std::memset(block_, 0, sizeof(block_));
        }

        if (block_len_ == BLOCK_LEN) {
            uint32_t words[16];
            words_from_le(block_, words, 16);
            uint32_t wide[16];
            compress(cv_, words, chunk_counter_,
                     static_cast<uint32_t>(BLOCK_LEN),
                     blocks_compressed_ == 0 ? CHUNK_START : 0, wide);
            std::memcpy(cv_, wide, sizeof(cv_));
            ++blocks_compressed_;
            block_len_ = 0;
            std::memset(block_, 0, sizeof(block_));
        }

        size_t chunk_remaining =
            CHUNK_LEN - (blocks_compressed_ * BLOCK_LEN + block_len_);
        size_t block_remaining = BLOCK_LEN - block_len_;
        size_t take = len;
        if (take > block_remaining) take = block_remaining;
        if (take > chunk_remaining) take = chunk_remaining;
        std::memcpy(block_ + block_len_, data, take);
        block_len_ = static_cast<uint8_t>(block_len_ + take);
        data += take;
        len -= take;
    }
}

void Hasher::finalize(uint8_t out[32])
{
    Output o{};
    std::memcpy(o.cv, cv_, sizeof(cv_));
    words_from_le(block_, o.block_words, 16);
    o.counter = chunk_counter_;
    o.block_len = block_len_;
    o.flags = (blocks_compressed_ == 0 ? CHUNK_START : 0) | CHUNK_END;

    int idx = cv_stack_len_;
    while (idx > 0) {
        --idx;
        uint32_t right_cv[8];
        o.chaining_value(right_cv);
        o = parent_output(cv_stack_[idx], right_cv);
    }
    o.root_bytes(out);
}

void hash(const uint8_t* data, size_t len, uint8_t out[32])
{
    if (len <= CHUNK_LEN) {
        // Single-chunk fast path: the chunk itself is the root.
        uint32_t cv[8];
        std::memcpy(cv, IV, sizeof(cv));
        size_t off = 0;
        bool first = true;
        while (len - off > BLOCK_LEN) {
            uint32_t words[16];
            words_from_le(data + off, words, 16);
            uint32_t wide[16];
            compress(cv, words, 0, BLOCK_LEN, first ? CHUNK_START : 0, wide);
            std::memcpy(cv, wide, 8 * sizeof(uint32_t));
            first = false;
            off += BLOCK_LEN;
        }
        uint8_t last[BLOCK_LEN] = {};
        std::memcpy(last, data + off, len - off);
        uint32_t words[16];
        words_from_le(last, words, 16);
        uint32_t wide[16];
        compress(cv, words, 0, static_cast<uint32_t>(len - off),
                 (first ? CHUNK_START : 0) | CHUNK_END | ROOT, wide);
        words_to_le(wide, out, 8);
        return;
    }
    Hasher h;
    h.update(data, len);
    h.finalize(out);
}

uint64_t compression_count() { return g_compressions.load(std::memory_order_relaxed); }
void reset_compression_count() { g_compressions.store(0, std::memory_order_relaxed); }

} // namespace posme::blake3
