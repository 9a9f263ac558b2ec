#include <string>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "qpomdp/error.hpp"
#include "qpomdp/policy.hpp"

using namespace qpomdp;

TEST_CASE("policies parse against their model") {
    Pomdp m = qtest::load_fixture("allpri2.qpomdp"); // actions go=0 stay=1, obs o=0
    Policy p = parse_policy(qtest::slurp("sample.qpol"), m);
    REQUIRE(p.num_memories() == 1);
    CHECK(p.memory_names[0] == "m0");
    REQUIRE(p.init.size() == 1);
    CHECK(p.init[0].first == 0);
    CHECK(p.init[0].second == 0);
    CHECK(p.act[0] == std::vector<ActionId>{1});
    REQUIRE(p.upd[0].size() == 2); // one observation times two actions
    CHECK(p.upd[0][0] == Policy::NONE); // go is never played
    CHECK(p.upd[0][1] == 0);
    REQUIRE(p.annot[0].present);
    CHECK(p.annot[0].y == Support{0});
    CHECK(p.annot[0].b == Support{0});
    CHECK(p.annot[0].level == 2);
    CHECK(validate_policy(m, p).empty());
}

TEST_CASE("initial_for maps observations and reports gaps") {
    Pomdp m = qtest::load_fixture("allpri2.qpomdp");
    Policy p = parse_policy(qtest::slurp("sample.qpol"), m);
    CHECK(p.initial_for(0) == 0);
    CHECK(p.initial_for(7) == Policy::NONE);
}

TEST_CASE("write_policy reproduces the canonical file") {
    Pomdp m = qtest::load_fixture("allpri2.qpomdp");
    std::string text = qtest::slurp("sample.qpol");
    Policy p = parse_policy(text, m);
    CHECK(write_policy(p, m) == text);
    // and the cycle is stable from any starting point
    std::string once = write_policy(p, m);
    CHECK(write_policy(parse_policy(once, m), m) == once);
}

TEST_CASE("policy parser rejects bad references") {
    Pomdp m = qtest::load_fixture("allpri2.qpomdp");
    // unknown action
    CHECK_THROWS_AS(parse_policy("QPOL v1\nmem: m0\ninit: o m0\nact: m0 jump\n"
                                 "upd: m0 o jump m0\n", m),
                    InputError);
    // unknown observation
    CHECK_THROWS_AS(parse_policy("QPOL v1\nmem: m0\ninit: ox m0\nact: m0 stay\n", m),
                    InputError);
    // unknown memory in an update
    CHECK_THROWS_AS(parse_policy("QPOL v1\nmem: m0\ninit: o m0\nact: m0 stay\n"
                                 "upd: m0 o stay m9\n", m),
                    InputError);
    // duplicate memory name
    CHECK_THROWS_AS(parse_policy("QPOL v1\nmem: m0\nmem: m0\ninit: o m0\nact: m0 stay\n", m),
                    InputError);
    // claims outside the support
    CHECK_THROWS_AS(parse_policy("QPOL v1\nmem: m0 Y { u } B { v } level 2\n"
                                 "init: o m0\nact: m0 stay\nupd: m0 o stay m0\n", m),
                    InputError);
    // no actions selected
    CHECK_THROWS_AS(parse_policy("QPOL v1\nmem: m0\ninit: o m0\nupd: m0 o stay m0\n", m),
                    InputError);
    // bad header
    CHECK_THROWS_AS(parse_policy("QPOLL v1\n", m), InputError);
}

TEST_CASE("validate_policy flags hand-built shape problems") {
    Pomdp m = qtest::load_fixture("allpri2.qpomdp");
    Policy p = parse_policy(qtest::slurp("sample.qpol"), m);

    Policy broken = p;
    broken.act[0] = {9};
    CHECK(!validate_policy(m, broken).empty());

    broken = p;
    broken.upd[0] = {0};
    CHECK(!validate_policy(m, broken).empty());

    broken = p;
    broken.init.clear();
    CHECK(!validate_policy(m, broken).empty());

    broken = p;
    broken.init = {{0, 5}};
    CHECK(!validate_policy(m, broken).empty());
}
