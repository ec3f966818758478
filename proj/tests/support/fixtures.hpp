#pragma once

#include <map>

#include "posme/prover.hpp"

// Shared gen/prove fixtures, built once per binary and keyed by parameters.

struct ProofFixture {
    posme::GenResult gen;
    posme::Proof proof;
    std::vector<uint8_t> bytes;
};

inline const ProofFixture& proof_fixture(uint8_t d_hc, uint64_t rho, uint16_t d,
                                         uint16_t q, uint8_t r, uint8_t seed_byte = 0x20)
{
    using Key = std::tuple<uint8_t, uint64_t, uint16_t, uint16_t, uint8_t, uint8_t>;
    static std::map<Key, ProofFixture> cache;
    const Key key{d_hc, rho, d, q, r, seed_byte};
    auto it = cache.find(key);
    if (it == cache.end()) {
        posme::Digest seed;
        seed.bytes.fill(seed_byte);
        ProofFixture f;
        f.gen = posme::gen(seed, posme::make_params(d_hc, rho, d, q, r));
        f.proof = posme::prove(f.gen.log, q, r);
        f.bytes = posme::serialize_proof(f.proof);
        it = cache.emplace(key, std::move(f)).first;
    }
    return it->second;
}
