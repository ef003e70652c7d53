#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gen.hpp"
#include "secidx/errors.hpp"
#include "secidx/problem.hpp"

using namespace secidx;

namespace {

ParseErrorKind kind_of(std::string_view text) {
    try {
        parse_instance(text);
    } catch (const ParseError& e) {
        return e.kind();
    }
    FAIL("expected a parse error for " << text);
    return ParseErrorKind::Malformed;
}

Rational q(long long a, long long b = 1) { return Rational(a, b); }

}  // namespace

TEST_CASE("parse the two-receiver XOR instance") {
    const Instance inst = parse_instance(R"({"t":2,"side_info":[[2],[1]],"msg_len":[1,1],"p":2})");
    CHECK(inst.t() == 2);
    CHECK(inst.p() == 2);
    CHECK(inst.side_info(0) == std::vector<std::size_t>{1});
    CHECK(inst.side_info(1) == std::vector<std::size_t>{0});
    CHECK(inst.knows(0, 1));
    CHECK_FALSE(inst.knows(0, 0));
    CHECK(inst.total_len() == 2);
}

TEST_CASE("parse the 3-cycle instance") {
    const Instance inst = parse_instance(R"({"t":3,"side_info":[[3],[1],[2]],"msg_len":[1,1,1]})");
    CHECK(inst.side_info(0) == std::vector<std::size_t>{2});
    CHECK(inst.side_info(2) == std::vector<std::size_t>{1});
    CHECK(inst.p() == 2);
}

TEST_CASE("defaults and normalization") {
    const Instance inst = parse_instance(R"({"t":3,"side_info":[[3,2,3],[],[1]]})");
    CHECK(inst.msg_len() == std::vector<std::size_t>{1, 1, 1});
    CHECK(inst.side_info(0) == std::vector<std::size_t>{1, 2});
    CHECK(inst.offset(2) == 2);
}

TEST_CASE("distinct diagnostics for bad instances") {
    CHECK(kind_of(R"({"t":1,"side_info":[[1]]})") == ParseErrorKind::SelfLoop);
    CHECK(kind_of(R"({"t":2,"side_info":[[3],[1]]})") == ParseErrorKind::IndexOutOfRange);
    CHECK(kind_of(R"({"t":2,"side_info":[[0],[1]]})") == ParseErrorKind::IndexOutOfRange);
    CHECK(kind_of(R"({"t":2,"side_info":[[2]]})") == ParseErrorKind::Malformed);
    CHECK(kind_of(R"({"t":2,"side_info":[[2],[1]],"msg_len":[1]})") == ParseErrorKind::Malformed);
    CHECK(kind_of(R"({"t":2,"side_info":[[2],[1]],"p":4})") == ParseErrorKind::InvalidField);
    CHECK(kind_of(R"({"t":2,"side_info":[[2],[1]],"demands":[[1,2],[2]]})") == ParseErrorKind::Groupcast);
    CHECK(kind_of(R"({"t":2,"side_info":[[2],[1]],"messages":3})") == ParseErrorKind::Groupcast);
    CHECK(kind_of(R"({"t":"two","side_info":[]})") == ParseErrorKind::Malformed);
    CHECK(kind_of("not json") == ParseErrorKind::Malformed);
    CHECK(kind_of(R"([1,2])") == ParseErrorKind::Malformed);
    // explicit unicast demands are accepted
    CHECK_NOTHROW(parse_instance(R"({"t":2,"side_info":[[2],[1]],"demands":[[1],[2]]})"));
}

TEST_CASE("parse, serialize, parse is the identity") {
    gen::Rng rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t t = gen::uniform(rng, 0, 6);
        std::vector<std::size_t> len(t);
        for (auto& l : len) l = gen::uniform(rng, 0, 3);
        const std::uint32_t p = trial % 3 == 0 ? 3 : 2;
        const Instance inst = gen::instance(rng, t, len, 0.4, p);
        const Instance back = parse_instance(serialize_instance(inst));
        CHECK(back == inst);
        CHECK(serialize_instance(back) == serialize_instance(inst));
    }
}

TEST_CASE("rate_of examples") {
    const Instance one(2, {{}}, {3});
    CHECK(rate_of(one, {3, {0}, 0}, 3).flatten() == std::vector<Rational>{q(1), q(1), q(0)});

    const Instance xr(2, {{1}, {0}}, {1, 1});
    CHECK(rate_of(xr, {1, {0, 0}, 0}, 1).flatten() == std::vector<Rational>{q(1), q(1), q(1), q(0), q(0)});

    const Instance uneven(2, {{}, {}}, {2, 1});
    CHECK(rate_of(uneven, KeyProfile::none(2), 2).flatten() ==
          std::vector<Rational>{q(1), q(1, 2), q(0), q(0), q(0)});

    CHECK_THROWS_AS(rate_of(xr, KeyProfile::none(2), 0), PreconditionError);
    CHECK_THROWS_AS(rate_of(xr, KeyProfile::none(3), 1), PreconditionError);
}

TEST_CASE("rate_of is invariant under scaling every length") {
    gen::Rng rng(22);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t t = gen::uniform(rng, 1, 4);
        std::vector<std::size_t> len(t);
        for (auto& l : len) l = gen::uniform(rng, 0, 5);
        KeyProfile keys{gen::uniform(rng, 0, 5), std::vector<std::size_t>(t), 0};
        for (auto& k : keys.l_ki) k = gen::uniform(rng, 0, 5);
        const std::size_t l = gen::uniform(rng, 1, 6);
        const Instance inst = gen::instance(rng, t, len);

        const std::size_t s = gen::uniform(rng, 2, 4);
        std::vector<std::size_t> len2 = len;
        for (auto& x : len2) x *= s;
        KeyProfile keys2 = keys;
        keys2.l_k *= s;
        for (auto& k : keys2.l_ki) k *= s;
        CHECK(rate_of(inst.with_msg_len(len2), keys2, l * s) == rate_of(inst, keys, l));
    }
}

TEST_CASE("key profile and rate vector files") {
    const KeyProfile k = parse_key_profile(R"({"l_k":2,"l_ki":[1,0],"l_w":1})");
    CHECK(k.l_k == 2);
    CHECK(k.l_ki == std::vector<std::size_t>{1, 0});
    CHECK(k.l_w == 1);
    CHECK(key_profile_from_json(key_profile_to_json(k)) == k);
    CHECK(k.private_total() == 1);

    const RateVector r = parse_rate_vector("1,1/2,1,0,0");
    CHECK(r.msg == std::vector<Rational>{q(1), q(1, 2)});
    CHECK(r.key == q(1));
    CHECK(r.private_keys == std::vector<Rational>{q(0), q(0)});
    CHECK(rate_vector_from_json(rate_vector_to_json(r)) == r);
    CHECK(rate_vector_from_json(json::parse(R"([1, "2/4", 3])")).msg == std::vector<Rational>{q(1)});
    CHECK(r.scaled(q(2)).msg[1] == q(1));
    CHECK_THROWS_AS(parse_rate_vector("1,1"), ParseError);
    CHECK_THROWS_AS(parse_rate_vector("1,-1,0"), ParseError);
}

TEST_CASE("rational text format") {
    CHECK(format_rational(q(0)) == "0/1");
    CHECK(format_rational(q(6, 4)) == "3/2");
    CHECK(parse_rational("6/4") == q(3, 2));
    CHECK(parse_rational("-2") == q(-2));
    CHECK(parse_rational("010/007") == q(10, 7));
    CHECK(parse_rational("-00") == q(0));
    CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
    CHECK_THROWS_AS(parse_rational("x"), ParseError);
}
