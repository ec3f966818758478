#pragma once

#include <string>

#include "posme/engine.hpp"

namespace posme {

// Run directory layout (format version 1, see FORMATS.md):
//   run.json        header: params, seed, retention, final transcript
//   roots.bin       (K+1) x 32-byte digests
//   transcripts.bin (K+1) x 32-byte digests
//   steps.bin       K records: d x u64 read coords, u64 write coord  [full only]
//   writelog.bin    K records: u64 t, u64 write coord, 64-byte old block,
//                   32-byte cursor                                   [full only]
// All integers little-endian. Loading recomputes the written blocks from the
// write log and rebuilds the per-vertex write index.

void save_run(const RunLog& log, const std::string& dir);
RunLog load_run(const std::string& dir);

} // namespace posme
