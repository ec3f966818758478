#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>

namespace posme {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed external input (proof bytes, run files, hex strings).
struct ParseError : Error {
    using Error::Error;
};

/// 256-bit digest. All comparisons are byte-wise.
struct Digest {
    std::array<uint8_t, 32> bytes{};

    bool operator==(const Digest&) const = default;
    auto operator<=>(const Digest&) const = default;

    const uint8_t* data() const { return bytes.data(); }
    uint8_t* data() { return bytes.data(); }
    static constexpr size_t size() { return 32; }
};

inline std::string to_hex(const Digest& d)
{
    static const char* k = "0123456789abcdef";
    std::string s;
    s.reserve(64);
    for (uint8_t b : d.bytes) {
        s.push_back(k[b >> 4]);
        s.push_back(k[b & 0xf]);
    }
    return s;
}

inline Digest digest_from_hex(const std::string& hex)
{
    if (hex.size() != 64) {
        throw ParseError("digest hex must be 64 characters, got " + std::to_string(hex.size()));
    }
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw ParseError(std::string("invalid hex character '") + c + "'");
    };
    Digest d;
    for (size_t i = 0; i < 32; ++i) {
        d.bytes[i] = static_cast<uint8_t>((nibble(hex[2 * i]) << 4) | nibble(hex[2 * i + 1]));
    }
    return d;
}

inline void store_le64(uint8_t* out, uint64_t x)
{
    for (int i = 0; i < 8; ++i) out[i] = static_cast<uint8_t>(x >> (8 * i));
}

inline uint64_t load_le64(const uint8_t* in)
{
    uint64_t x = 0;
    for (int i = 0; i < 8; ++i) x |= static_cast<uint64_t>(in[i]) << (8 * i);
    return x;
}

} // namespace posme
