#pragma once

// Frozen reference vectors, produced by the standalone generator under
// tests/oracle/ (official-implementation hashes, naive reimplementations of
// framing, init, trees and the step loop). Nothing here links the library.

#include <fstream>
#include <string>

#include <doctest.h>
#include <json.hpp>

#include "posme/digest.hpp"

inline const nlohmann::json& oracle_vectors()
{
    static const nlohmann::json v = [] {
        std::ifstream f(std::string(POSME_TEST_DATA_DIR) + "/oracle_vectors.json");
        REQUIRE(f.good());
        return nlohmann::json::parse(f);
    }();
    return v;
}

inline const nlohmann::json& analysis_constants()
{
    static const nlohmann::json v = [] {
        std::ifstream f(std::string(POSME_TEST_DATA_DIR) + "/analysis_constants.json");
        REQUIRE(f.good());
        return nlohmann::json::parse(f);
    }();
    return v;
}

inline posme::Digest dig(const nlohmann::json& hex)
{
    return posme::digest_from_hex(hex.get<std::string>());
}

inline posme::Digest filled(uint8_t byte)
{
    posme::Digest d;
    d.bytes.fill(byte);
    return d;
}
