#pragma once

#include <cstddef>
#include <cstdint>

namespace posme::blake3 {

/// One-shot hash, 32-byte output.
void hash(const uint8_t* data, size_t len, uint8_t out[32]);

/// Incremental hasher for inputs assembled in pieces.
class Hasher {
public:
    Hasher();
    void update(const uint8_t* data, size_t len);
    void finalize(uint8_t out[32]);

private:
    uint32_t cv_[8];
    uint64_t chunk_counter_;
    uint8_t block_[64];
    uint8_t block_len_;
    uint8_t blocks_compressed_;
    uint32_t cv_stack_[54][8];
    uint8_t cv_stack_len_;
};

/// Process-wide count of compression-function invocations. Used by the
/// instrumented cost tests and the benchmark harness.
uint64_t compression_count();
void reset_compression_count();

} // namespace posme::blake3
