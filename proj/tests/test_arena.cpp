#include <doctest.h>

#include <bit>

#include "posme/engine.hpp"
#include "posme/hashing.hpp"
#include "support/vectors.hpp"

using namespace posme;

TEST_CASE("skip parent is a right shift")
{
    CHECK(skip_parent(0b1011) == 0b101);
    CHECK(skip_parent(1) == 0);
    const uint64_t d_hc = 20;
    CHECK(skip_parent((uint64_t{1} << d_hc) - 1) == (uint64_t{1} << (d_hc - 1)) - 1);
}

TEST_CASE("arena init matches the straight-line reference")
{
    const auto& v = oracle_vectors().at("arena_dhc2");
    const InitResult init = init_arena(filled(0x00), 2);
    REQUIRE(init.arena.size() == 4);
    for (size_t i = 0; i < 4; ++i) {
        CHECK(to_hex(init.arena[i].data) ==
              v.at("blocks").at(i).at("data").get<std::string>());
        CHECK(to_hex(init.arena[i].causal) ==
              v.at("blocks").at(i).at("causal").get<std::string>());
    }
    CHECK(to_hex(init.r0) == v.at("r0").get<std::string>());
    CHECK(to_hex(init.t0) == v.at("t0").get<std::string>());
}

TEST_CASE("init is deterministic and seed-sensitive")
{
    const auto& v = oracle_vectors().at("arena_dhc2");
    const Arena a = init_arena_blocks(filled(0x00), 2);
    const Arena b = init_arena_blocks(filled(0x00), 2);
    for (size_t i = 0; i < 4; ++i) CHECK(a[i] == b[i]);

    Digest flipped = filled(0x00);
    flipped.bytes[0] ^= 0x01;
    const Arena c = init_arena_blocks(flipped, 2);
    CHECK(to_hex(c[0].data) == v.at("flipped_seed_block0_data").get<std::string>());
    for (size_t i = 0; i < 4; ++i) CHECK(a[i] != c[i]);
}

TEST_CASE("single-vertex recomputation agrees with full init")
{
    const auto& v = oracle_vectors().at("arena_dhc2");
    const Block b5 = init_block(filled(0x00), 5);
    CHECK(to_hex(b5.data) == v.at("dhc3_block5_data").get<std::string>());
    CHECK(to_hex(b5.causal) == v.at("dhc3_block5_causal").get<std::string>());

    const Arena a = init_arena_blocks(filled(0x07), 5);
    for (uint64_t i : {uint64_t{0}, uint64_t{1}, uint64_t{2}, uint64_t{13}, uint64_t{31}}) {
        CHECK(init_block(filled(0x07), i) == a[i]);
    }
}

TEST_CASE("ancestry locality: recomputation costs bit_length + 1 hashes per field")
{
    const Digest seed = filled(0x42);
    for (uint64_t v : {uint64_t{0}, uint64_t{1}, uint64_t{5}, uint64_t{6}, uint64_t{100},
                       uint64_t{1023}}) {
        hashing::reset_hash_call_count();
        (void)init_block(seed, v);
        const uint64_t width = v == 0 ? 0 : std::bit_width(v);
        CHECK(hashing::hash_call_count() == 2 * (width + 1));
    }
}

TEST_CASE("invalid dimensions are rejected")
{
    CHECK_THROWS_AS((void)init_arena_blocks(filled(0), 0), Error);
    CHECK_THROWS_AS((void)init_arena_blocks(filled(0), 33), Error);
}

TEST_CASE("parameter validation modes")
{
    Params p = make_params(10, 4, 8, 64, 2);
    CHECK_NOTHROW(p.validate(Params::Mode::strict));
    CHECK_NOTHROW(p.validate(Params::Mode::toy));

    Params low_rho = make_params(10, 0, 8, 64, 2);
    CHECK_THROWS_AS(low_rho.validate(Params::Mode::strict), Error);
    CHECK_NOTHROW(low_rho.validate(Params::Mode::toy));

    Params low_d = make_params(10, 4, 2, 64, 2);
    CHECK_THROWS_AS(low_d.validate(Params::Mode::strict), Error);
    CHECK_NOTHROW(low_d.validate(Params::Mode::toy));

    Params low_q = make_params(10, 4, 8, 8, 2);
    CHECK_THROWS_AS(low_q.validate(Params::Mode::strict), Error);

    Params low_r = make_params(10, 4, 8, 64, 1);
    CHECK_THROWS_AS(low_r.validate(Params::Mode::strict), Error);
    CHECK_NOTHROW(low_r.validate(Params::Mode::toy));

    Params bad_dim = make_params(0, 4, 8);
    CHECK_THROWS_AS(bad_dim.validate(Params::Mode::toy), Error);
}
