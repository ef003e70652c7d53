#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gen.hpp"
#include "oracles.hpp"
#include "secidx/errors.hpp"
#include "secidx/gotp.hpp"

using namespace secidx;

namespace {

const Instance kXor(2, {{1}, {0}}, {1, 1});
const Instance kThreeCycle(2, {{2}, {0}, {1}}, {1, 1, 1});
const Instance kPentagon(2, {{4, 1}, {0, 2}, {1, 3}, {2, 4}, {3, 0}}, {1, 1, 1, 1, 1});

Rational q(long long a, long long b = 1) { return Rational(a, b); }

void check_secure(const SecureCode& code) {
    CHECK(verify_perfect_secrecy(code).pass);
    CHECK(verify_decoding(code).pass);
    if (code.is_linear()) {
        const BlockLayout layout = code.layout();
        CHECK(oracle::perfectly_secure(gen::to_mat(code.matrix().pi), layout.key_width(), layout.msg_width(),
                                       static_cast<int>(code.instance.p())));
    }
}

SecureCode built(const Instance& inst, const KeyProfile& keys) {
    const Feasibility f = gotp_feasible(inst, keys);
    REQUIRE(f.feasible);
    return construct_gotp(inst, keys, *f.inner);
}

}  // namespace

TEST_CASE("gotp_feasible examples") {
    const Instance one3(2, {{}}, {3});
    const auto shannon = gotp_feasible(one3, {3, {0}, 0});
    CHECK(shannon.feasible);
    CHECK(shannon.inner->length() == 3);
    CHECK(shannon.public_len == 3);

    const auto xr = gotp_feasible(kXor, {1, {0, 0}, 0});
    CHECK(xr.feasible);
    CHECK(xr.reduced.msg_len() == std::vector<std::size_t>{1, 1});
    CHECK(xr.inner->length() == 1);

    const Instance one2(2, {{}}, {2});
    const auto short_key = gotp_feasible(one2, {1, {0}, 0});
    CHECK_FALSE(short_key.feasible);
    CHECK(short_key.reason.find("l_k < required code length") != std::string::npos);

    // a public-length cap below l' + sum min(l_i, l_ki)
    const auto capped = gotp_feasible(kXor, {1, {1, 0}, 0}, 1);
    CHECK_FALSE(capped.feasible);
    CHECK(gotp_feasible(kXor, {1, {1, 0}, 0}, 2).feasible);

    CHECK_THROWS_AS(gotp_feasible(kXor, {1, {0, 0}, 1}), PreconditionError);
    CHECK_THROWS_AS(gotp_feasible(kXor, {1, {0}, 0}), PreconditionError);
}

TEST_CASE("construct_gotp examples") {
    const Instance one3(2, {{}}, {3});
    const SecureCode shannon = built(one3, {3, {0}, 0});
    CHECK(shannon.code_len == 3);
    CHECK(shannon.matrix().pi == FieldMatrix::identity(3).hstack(FieldMatrix::identity(3)));
    check_secure(shannon);

    const SecureCode xr = built(kXor, {1, {0, 0}, 0});
    CHECK(xr.code_len == 1);
    CHECK(xr.matrix().pi == FieldMatrix::from_rows({{1, 1, 1}}, 2));
    check_secure(xr);

    const Instance two(2, {{}, {}}, {1, 1});
    const SecureCode cor = built(two, {0, {1, 1}, 0});
    CHECK(cor.code_len == 2);
    CHECK(cor.matrix().pi == FieldMatrix::from_rows({{1, 0, 1, 0}, {0, 1, 0, 1}}, 2));
    check_secure(cor);

    const SecureCode cyc = built(kThreeCycle, {2, {0, 0, 0}, 0});
    CHECK(cyc.code_len == 2);
    check_secure(cyc);
}

TEST_CASE("construct_gotp: rate accounting and unused key symbols") {
    // mixed: M_1 of length 2 with one private-key symbol, M_2 of length 1 without
    const Instance inst(2, {{1}, {0}}, {2, 1});
    const KeyProfile keys{2, {1, 0}, 0};
    const SecureCode code = built(inst, keys);
    // inner code for reduced lengths (1, 1) is the XOR, so l = 1 + 1
    CHECK(code.code_len == 2);
    CHECK(code.rate().flatten() == std::vector<Rational>{q(1), q(1, 2), q(1), q(1, 2), q(0)});
    // the second common-key symbol is unused
    CHECK(code.matrix().pi.col_is_zero(1));
    check_secure(code);
}

TEST_CASE("construct_gotp warns about excess private key") {
    const Instance one(2, {{}}, {1});
    const KeyProfile keys{0, {3}, 0};
    const Feasibility f = gotp_feasible(one, keys);
    REQUIRE(f.feasible);
    std::vector<std::string> warnings;
    const SecureCode code = construct_gotp(one, keys, *f.inner, &warnings);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("receiver 1") != std::string::npos);
    CHECK(code.code_len == 1);
    check_secure(code);
}

TEST_CASE("construct_gotp preconditions") {
    const auto inner = make_linear_code(kXor, FieldMatrix::from_rows({{1, 1}}, 2));
    REQUIRE(inner);
    CHECK_THROWS_AS(construct_gotp(kXor, {0, {0, 0}, 0}, *inner), PreconditionError);
    CHECK_THROWS_AS(construct_gotp(kXor, {1, {1, 0}, 0}, *inner), PreconditionError);
    LinearCode broken{kXor, FieldMatrix::from_rows({{1, 0}}, 2), inner->decoders};
    CHECK_THROWS_AS(construct_gotp(kXor, {1, {0, 0}, 0}, broken), PreconditionError);
}

TEST_CASE("every construction on random instances passes both verifiers") {
    gen::Rng rng(51);
    int built_codes = 0;
    for (int trial = 0; trial < 80; ++trial) {
        const std::size_t t = gen::uniform(rng, 1, 4);
        std::vector<std::size_t> len(t);
        for (auto& l : len) l = gen::uniform(rng, 0, 2);
        const Instance inst = gen::instance(rng, t, len);
        KeyProfile keys{gen::uniform(rng, 0, 4), std::vector<std::size_t>(t), 0};
        for (auto& k : keys.l_ki) k = gen::uniform(rng, 0, 3);
        const Feasibility f = gotp_feasible(inst, keys);
        const auto lstar = min_rank(f.reduced, f.reduced.total_len());
        REQUIRE(lstar);
        CHECK(f.feasible == (lstar->length <= keys.l_k));
        if (!f.feasible) continue;
        const SecureCode code = construct_gotp(inst, keys, *f.inner);
        std::size_t l = f.inner->length();
        for (std::size_t i = 0; i < t; ++i) l += std::min(len[i], keys.l_ki[i]);
        CHECK(code.code_len == l);
        if (l > 0) CHECK(code.rate() == rate_of(inst, keys, l));
        check_secure(code);
        ++built_codes;
    }
    CHECK(built_codes > 30);
}

TEST_CASE("expand_with_private_keys examples") {
    const SecureCode xr = built(kXor, {1, {0, 0}, 0});
    const SecureCode same = expand_with_private_keys(xr, {0, 0});
    CHECK(same.matrix() == xr.matrix());
    CHECK(same.instance == xr.instance);

    const Instance one3(2, {{}}, {3});
    const SecureCode shannon = built(one3, {3, {0}, 0});
    const SecureCode big = expand_with_private_keys(shannon, {2});
    CHECK(big.code_len == 5);
    CHECK(big.keys == KeyProfile{3, {2}, 0});
    CHECK(big.instance.msg_len() == std::vector<std::size_t>{5});
    check_secure(big);

    const SecureCode xr2 = expand_with_private_keys(xr, {1, 0});
    CHECK(xr2.code_len == 2);
    CHECK(xr2.instance.msg_len() == std::vector<std::size_t>{2, 1});
    check_secure(xr2);

    CHECK_THROWS_AS(expand_with_private_keys(xr2, {1, 0}), PreconditionError);
    CHECK_THROWS_AS(expand_with_private_keys(xr, {1}), PreconditionError);
}

TEST_CASE("expand_with_private_keys on table codes") {
    const SecureCode xr = to_table_code(built(kXor, {1, {0, 0}, 0}));
    const SecureCode grown = expand_with_private_keys(xr, {1, 1});
    CHECK_FALSE(grown.is_linear());
    CHECK(grown.code_len == 3);
    check_secure(grown);
    const SecureCode lin = expand_with_private_keys(built(kXor, {1, {0, 0}, 0}), {1, 1});
    CHECK(joint_of(lin).entries.size() == joint_of(grown).entries.size());
}

TEST_CASE("expansion rate equals the closed form") {
    gen::Rng rng(52);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t t = gen::uniform(rng, 1, 3);
        std::vector<std::size_t> len(t);
        for (auto& l : len) l = gen::uniform(rng, 0, 2);
        const Instance inst = gen::instance(rng, t, len);
        const Feasibility f = gotp_feasible(inst, {inst.total_len(), std::vector<std::size_t>(t, 0), 0});
        REQUIRE(f.feasible);
        const SecureCode base = construct_gotp(inst, {inst.total_len(), std::vector<std::size_t>(t, 0), 0}, *f.inner);
        if (base.code_len == 0) continue;
        std::vector<std::size_t> extra(t);
        std::size_t added = 0;
        for (auto& e : extra) added += e = gen::uniform(rng, 0, 2);
        const SecureCode grown = expand_with_private_keys(base, extra);
        check_secure(grown);

        const RateVector r = base.rate();
        const Rational l(static_cast<long long>(base.code_len));
        Rational extra_rate = 0;
        for (std::size_t e : extra) extra_rate += Rational(static_cast<long long>(e)) / l;
        const Rational alpha = 1 / (1 + extra_rate);
        RateVector want;
        for (std::size_t i = 0; i < t; ++i) {
            const Rational ri = Rational(static_cast<long long>(extra[i])) / l;
            want.msg.push_back(alpha * (r.msg[i] + ri));
            want.private_keys.push_back(alpha * ri);
        }
        want.key = alpha * r.key;
        CHECK(grown.rate() == want);
    }
}

TEST_CASE("pad_conventional examples") {
    const auto xr = make_linear_code(kXor, FieldMatrix::from_rows({{1, 1}}, 2));
    REQUIRE(xr);
    const SecureCode padded = pad_conventional(*xr, 1);
    CHECK(padded.matrix().pi == FieldMatrix::from_rows({{1, 1, 1}}, 2));
    CHECK(padded.rate().flatten() == std::vector<Rational>{q(1), q(1), q(1), q(0), q(0)});
    check_secure(padded);

    const Instance one2(2, {{}}, {2});
    const auto id = make_linear_code(one2, FieldMatrix::identity(2));
    REQUIRE(id);
    const SecureCode pad2 = pad_conventional(*id, 2);
    CHECK(pad2.matrix().pi == FieldMatrix::identity(2).hstack(FieldMatrix::identity(2)));
    check_secure(pad2);

    const auto pent = min_rank(kPentagon, 5);
    REQUIRE(pent);
    const SecureCode p5 = pad_conventional(pent->witness, 3);
    CHECK(p5.code_len == 3);
    check_secure(p5);

    const SecureCode longer = pad_conventional(*xr, 2);
    CHECK(longer.keys.l_k == 2);
    check_secure(longer);
    CHECK_THROWS_AS(pad_conventional(pent->witness, 2), PreconditionError);
}

TEST_CASE("no perfectly secure code shorter than the private keys without a common key") {
    // exhaustive over table codes (up to relabeling of code values)
    const Instance one(2, {{}}, {1});
    CHECK_FALSE(find_secure_table_code(one, {0, {1}, 0}, 0));
    CHECK(find_secure_table_code(one, {0, {1}, 0}, 1));

    const Instance two(2, {{}, {}}, {1, 1});
    CHECK_FALSE(find_secure_table_code(two, {0, {1, 1}, 0}, 1));
    CHECK_FALSE(find_secure_table_code(kXor, {0, {1, 1}, 0}, 1));
    CHECK(find_secure_table_code(kXor, {0, {1, 1}, 0}, 2));

    const Instance one2(2, {{}}, {2});
    CHECK_FALSE(find_secure_table_code(one2, {0, {2}, 0}, 1));
}
