#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gen.hpp"
#include "oracles.hpp"
#include "secidx/conventional.hpp"
#include "secidx/errors.hpp"

using namespace secidx;

namespace {

const Instance kXor(2, {{1}, {0}}, {1, 1});
const Instance kThreeCycle(2, {{2}, {0}, {1}}, {1, 1, 1});
const Instance kPentagon(2, {{4, 1}, {0, 2}, {1, 3}, {2, 4}, {3, 0}}, {1, 1, 1, 1, 1});

FieldMatrix m2(std::vector<SymbolVec> rows, std::size_t cols) { return FieldMatrix::from_rows(rows, cols, 2); }

}  // namespace

TEST_CASE("verify_zero_error: XOR instance") {
    const auto code = make_linear_code(kXor, m2({{1, 1}}, 2));
    REQUIRE(code);
    CHECK(verify_zero_error(*code).pass);
}

TEST_CASE("verify_zero_error: sending M_1 alone fails at receiver 2") {
    CHECK_FALSE(make_linear_code(kXor, m2({{1, 0}}, 2)));
    // hand-written decoders: receiver 1 reads C, receiver 2 guesses 0
    LinearCode code{kXor, m2({{1, 0}}, 2), {m2({{1, 0}}, 2), m2({{0, 0}}, 2)}};
    const auto r = verify_zero_error(code);
    REQUIRE_FALSE(r.pass);
    REQUIRE(r.failure);
    CHECK(r.failure->receiver == 1);
    CHECK(r.failure->messages == SymbolVec{0, 1});
}

TEST_CASE("verify_zero_error: 3-cycle two-symbol code") {
    const auto g = m2({{1, 1, 0}, {0, 1, 1}}, 3);
    const auto code = make_linear_code(kThreeCycle, g);
    REQUIRE(code);
    CHECK(verify_zero_error(*code).pass);
    CHECK(oracle::decodable(kThreeCycle, gen::to_mat(g)));
}

TEST_CASE("verify_zero_error rejects mismatched shapes and respects the cap") {
    LinearCode bad{kXor, m2({{1, 1}}, 2), {m2({{1, 0}}, 2)}};
    CHECK_THROWS_AS(verify_zero_error(bad), PreconditionError);
    const Instance wide(2, std::vector<std::vector<std::size_t>>(3), {8, 8, 8});
    const auto code = make_linear_code(wide, FieldMatrix::identity(24));
    REQUIRE(code);
    Caps caps;
    caps.verification = 1u << 20;
    CHECK_THROWS_AS(verify_zero_error(*code, caps), CapExceeded);
}

TEST_CASE("min_rank examples") {
    const auto xr = min_rank(kXor, 2);
    REQUIRE(xr);
    CHECK(xr->length == 1);
    CHECK(xr->witness.encoder == m2({{1, 1}}, 2));

    const Instance empty(2, {{}, {}, {}}, {1, 1, 1});
    const auto e = min_rank(empty, 3);
    REQUIRE(e);
    CHECK(e->length == 3);
    CHECK_FALSE(min_rank(empty, 2));

    const auto pent = min_rank(kPentagon, 5);
    REQUIRE(pent);
    CHECK(pent->length == 3);
    CHECK(verify_zero_error(pent->witness).pass);
    CHECK(oracle::decodable(kPentagon, gen::to_mat(pent->witness.encoder)));
    CHECK_FALSE(oracle::some_linear_code(kPentagon, 2));
}

TEST_CASE("min_rank refuses too many receivers") {
    const Instance big(2, std::vector<std::vector<std::size_t>>(11), std::vector<std::size_t>(11, 1));
    CHECK_THROWS_AS(min_rank(big, 11), CapExceeded);
}

TEST_CASE("find_linear_code examples") {
    const auto one = find_linear_code(kXor, 1);
    REQUIRE(one);
    CHECK(one->encoder == m2({{1, 1}}, 2));
    CHECK_FALSE(find_linear_code(kXor, 0));

    const auto cyc = find_linear_code(kThreeCycle, 2);
    REQUIRE(cyc);
    CHECK(verify_zero_error(*cyc).pass);
    CHECK(oracle::decodable(kThreeCycle, gen::to_mat(cyc->encoder)));
    CHECK_FALSE(find_linear_code(kThreeCycle, 1));

    // a longer length than needed is padded with zero rows
    const auto padded = find_linear_code(kXor, 3);
    REQUIRE(padded);
    CHECK(padded->length() == 3);
    CHECK(verify_zero_error(*padded).pass);
}

TEST_CASE("longer messages and odd fields") {
    const Instance single(2, {{}}, {2});
    const auto s = min_rank(single, 2);
    REQUIRE(s);
    CHECK(s->length == 2);

    const Instance xor3(3, {{1}, {0}}, {1, 1});
    const auto x3 = min_rank(xor3, 2);
    REQUIRE(x3);
    CHECK(x3->length == 1);
    CHECK(verify_zero_error(x3->witness).pass);
    CHECK(oracle::decodable(xor3, gen::to_mat(x3->witness.encoder)));

    // XOR with two-symbol messages needs two symbols
    const Instance xor2(2, {{1}, {0}}, {2, 2});
    const auto x2 = min_rank(xor2, 4);
    REQUIRE(x2);
    CHECK(x2->length == 2);
    CHECK(oracle::decodable(xor2, gen::to_mat(x2->witness.encoder)));
    CHECK_FALSE(oracle::some_linear_code(xor2, 1));
}

TEST_CASE("brute_force_optimal examples") {
    const auto xr = brute_force_optimal(kXor);
    CHECK(xr.exponent == 1);
    CHECK(verify_zero_error(xr.witness).pass);
    CHECK(oracle::some_table_code(kXor, 2));
    CHECK_FALSE(oracle::some_table_code(kXor, 1));

    const Instance single(2, {{}}, {2});
    CHECK(brute_force_optimal(single).exponent == 2);
    CHECK_FALSE(oracle::some_table_code(single, 3));

    const Instance none(2, {}, {});
    CHECK(brute_force_optimal(none).exponent == 0);
    const Instance zero_len(2, {{}, {}}, {0, 0});
    CHECK(brute_force_optimal(zero_len).exponent == 0);
}

TEST_CASE("searches agree with the exhaustive oracles on random small instances") {
    gen::Rng rng(31);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t t = gen::uniform(rng, 1, 3);
        const Instance inst = gen::instance(rng, t, std::vector<std::size_t>(t, 1), 0.5);
        CAPTURE(serialize_instance(inst));
        const auto lin = min_rank(inst, t);
        REQUIRE(lin);
        CHECK(oracle::decodable(inst, gen::to_mat(lin->witness.encoder)));
        CHECK(verify_zero_error(lin->witness).pass);
        if (lin->length > 0) CHECK_FALSE(oracle::some_linear_code(inst, lin->length - 1));

        const auto any = brute_force_optimal(inst);
        CHECK(any.exponent <= lin->length);
        CHECK(verify_zero_error(any.witness).pass);
        CHECK(oracle::some_table_code(inst, std::uint64_t{1} << any.exponent));
        if (any.exponent > 0) CHECK_FALSE(oracle::some_table_code(inst, std::uint64_t{1} << (any.exponent - 1)));
    }
}

TEST_CASE("min_rank never decreases when side information is removed") {
    gen::Rng rng(32);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t t = gen::uniform(rng, 2, 5);
        const Instance inst = gen::instance(rng, t, std::vector<std::size_t>(t, 1), 0.6);
        const auto base = min_rank(inst, t);
        REQUIRE(base);
        for (std::size_t i = 0; i < t; ++i) {
            for (std::size_t drop : inst.side_info(i)) {
                auto side = inst.side_info();
                std::erase(side[i], drop);
                const Instance less(2, side, inst.msg_len());
                const auto r = min_rank(less, t);
                REQUIRE(r);
                CHECK(r->length >= base->length);
            }
        }
    }
}

TEST_CASE("min_rank dominates the nonlinear optimum on larger random instances") {
    gen::Rng rng(33);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t t = gen::uniform(rng, 3, 5);
        const Instance inst = gen::instance(rng, t, std::vector<std::size_t>(t, 1), 0.5);
        const auto lin = min_rank(inst, t);
        REQUIRE(lin);
        CHECK(brute_force_optimal(inst).exponent <= lin->length);
    }
}

TEST_CASE("derive_table_decoders detects collisions") {
    // constant encoder cannot serve receiver 1 of the XOR instance
    CHECK_FALSE(derive_table_decoders(kXor, 0, {0, 0, 0, 0}));
    const auto dec = derive_table_decoders(kXor, 1, {0, 1, 1, 0});
    REQUIRE(dec);
    TableCode code{kXor, 1, {0, 1, 1, 0}, *dec};
    CHECK(verify_zero_error(code).pass);
}
