#include <cstdint>
#include <string>
#include <vector>

#include "doctest.h"
#include "qpomdp/error.hpp"
#include "qpomdp/prob.hpp"

using namespace qpomdp;

TEST_CASE("ratios reduce to lowest terms") {
    Prob p = Prob::from_ratio(2, 4);
    CHECK(p.exact());
    CHECK(p.num() == 1);
    CHECK(p.den() == 2);
    CHECK(p == Prob::from_ratio(1, 2));
    CHECK(p.text() == "1/2");

    CHECK(Prob::from_ratio(0, 7).is_zero());
    CHECK(Prob::from_ratio(0, 7).text() == "0");
    CHECK(Prob::from_ratio(5, 5).is_one());
    CHECK(Prob::from_ratio(5, 5).text() == "1");
    CHECK(Prob::from_ratio(-3, -6) == Prob::from_ratio(1, 2));
    CHECK_THROWS_AS(Prob::from_ratio(1, 0), InputError);
}

TEST_CASE("exact arithmetic stays exact") {
    Prob a = Prob::from_ratio(1, 3) + Prob::from_ratio(1, 6);
    CHECK(a.exact());
    CHECK(a == Prob::from_ratio(1, 2));

    Prob b = Prob::from_ratio(1, 2) * Prob::from_ratio(2, 3);
    CHECK(b.exact());
    CHECK(b == Prob::from_ratio(1, 3));

    Prob sum = Prob::zero();
    for (int i = 0; i < 10; ++i) sum = sum + Prob::from_ratio(1, 10);
    CHECK(sum.is_one());
}

TEST_CASE("overflowing products fall back to doubles") {
    const std::int64_t big = 1000000007LL * 3; // coprime with the numerator
    Prob tiny = Prob::from_ratio(1, big);
    Prob prod = tiny * tiny;
    Prob prod2 = prod * tiny; // denominator would need ~2^90 bits
    CHECK(prod.exact());      // still fits in 64 bits
    CHECK(!prod2.exact());
    CHECK(prod2.value() == doctest::Approx(1.0 / big / big / big));
}

TEST_CASE("doubles keep the exact endpoints exact") {
    CHECK(Prob::from_double(0.0).exact());
    CHECK(Prob::from_double(1.0).is_one());
    Prob d = Prob::from_double(0.25);
    CHECK(!d.exact());
    CHECK(d.value() == 0.25);
}

TEST_CASE("parse_prob accepts the three literal shapes") {
    CHECK(parse_prob("1/2") == Prob::from_ratio(1, 2));
    CHECK(parse_prob("1") == Prob::one());
    CHECK(parse_prob("0") == Prob::zero());
    Prob d = parse_prob("0.25");
    CHECK(!d.exact());
    CHECK(d.value() == 0.25);

    CHECK_THROWS_AS(parse_prob("abc"), InputError);
    CHECK_THROWS_AS(parse_prob("1/0"), InputError);
    CHECK_THROWS_AS(parse_prob(""), InputError);
    CHECK_THROWS_AS(parse_prob("1/2/3"), InputError);
}

TEST_CASE("parse_prob enforces the unit interval unless told otherwise") {
    CHECK_THROWS_AS(parse_prob("3/2"), InputError);
    CHECK_THROWS_AS(parse_prob("2"), InputError);
    CHECK_THROWS_AS(parse_prob("1.5"), InputError);
    Prob p = parse_prob("3/2", false);
    CHECK(p == Prob::from_ratio(3, 2));
}

TEST_CASE("text round-trips through parse_prob") {
    for (const Prob& p : {Prob::from_ratio(3, 7), Prob::from_ratio(1, 1), Prob::zero(),
                          Prob::from_double(0.1), Prob::from_double(1.0 / 3.0)}) {
        Prob back = parse_prob(p.text(), false);
        CHECK(back == p);
        CHECK(back.text() == p.text());
    }
}

TEST_CASE("sums_to_one is exact for rationals and tolerant for doubles") {
    CHECK(sums_to_one({Prob::from_ratio(1, 3), Prob::from_ratio(1, 3), Prob::from_ratio(1, 3)}));
    CHECK(!sums_to_one({Prob::from_ratio(1, 3), Prob::from_ratio(1, 3)}));
    std::vector<Prob> tenths(10, Prob::from_double(0.1));
    CHECK(sums_to_one(tenths)); // inexact but within the 1e-9 tolerance
    CHECK(!sums_to_one({Prob::from_double(0.1), Prob::from_double(0.8)}));
}

TEST_CASE("format_double emits the shortest round-tripping decimal") {
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(0.1) == "0.1");
    double third = 1.0 / 3.0;
    CHECK(std::stod(format_double(third)) == third);
}
