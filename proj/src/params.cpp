#include "posme/params.hpp"

#include <string>

namespace posme {

void Params::validate(Mode mode) const
{
    // Structural limits apply in every mode. The d_hc ceiling keeps the dense
    // arena addressable (2^32 blocks is already 256 GiB).
    if (d_hc < 1 || d_hc > 32) {
        throw Error("d_hc must be in [1, 32], got " + std::to_string(d_hc));
    }
    if (reads_per_step < 1) {
        throw Error("reads_per_step must be at least 1");
    }
    if (recursion_depth < 1) {
        throw Error("recursion_depth must be at least 1");
    }
    if (mode == Mode::toy) return;

    if (steps < arena_blocks()) {
        throw Error("strict mode requires steps >= arena_blocks (write density >= 1); "
                    "pass the toy override for desk-scale runs");
    }
    if (reads_per_step < 4) {
        throw Error("strict mode requires reads_per_step >= 4");
    }
    if (challenges < 64) {
        throw Error("strict mode requires challenges >= 64");
    }
    if (recursion_depth < 2) {
        throw Error("strict mode requires recursion_depth >= 2");
    }
}

} // namespace posme
