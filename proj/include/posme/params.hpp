#pragma once

#include <cstdint>

#include "posme/digest.hpp"

namespace posme {

/// Protocol constants. `strict` validation enforces the recommended floors;
/// `toy` admits desk-scale test configurations.
struct Params {
    uint8_t d_hc = 24;            // arena dimension, N = 2^d_hc
    uint64_t steps = 0;           // K
    uint16_t reads_per_step = 8;  // d
    uint16_t challenges = 128;    // Q
    uint8_t recursion_depth = 3;  // R

    uint64_t arena_blocks() const { return uint64_t{1} << d_hc; }
    double write_density() const
    {
        return static_cast<double>(steps) / static_cast<double>(arena_blocks());
    }

    enum class Mode { strict, toy };

    /// Throws Error on violation. Strict mode additionally requires
    /// K >= N, d >= 4, Q >= 64, R >= 2.
    void validate(Mode mode) const;

    bool operator==(const Params&) const = default;
};

inline Params make_params(uint8_t d_hc, uint64_t rho, uint16_t d, uint16_t q = 128,
                          uint8_t r = 3)
{
    Params p;
    p.d_hc = d_hc;
    p.steps = rho << d_hc;
    p.reads_per_step = d;
    p.challenges = q;
    p.recursion_depth = r;
    return p;
}

} // namespace posme
