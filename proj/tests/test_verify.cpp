#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "qpomdp/error.hpp"
#include "qpomdp/policy.hpp"
#include "qpomdp/verify.hpp"

using namespace qpomdp;

namespace {

std::vector<std::vector<std::uint32_t>> sorted_sccs(
    std::vector<std::vector<std::uint32_t>> sccs) {
    for (auto& c : sccs) std::sort(c.begin(), c.end());
    return sccs;
}

} // namespace

TEST_CASE("bottom_sccs keeps only sinks of the reachable part") {
    // 0 -> 1 <-> 2, 3 self-loops but is unreachable
    std::vector<std::vector<std::uint32_t>> adj{{1}, {2}, {1}, {3}};
    auto sccs = sorted_sccs(bottom_sccs(adj, {0}));
    REQUIRE(sccs.size() == 1);
    CHECK(sccs[0] == std::vector<std::uint32_t>{1, 2});
}

TEST_CASE("bottom_sccs orders components by smallest member") {
    // 0 fans out into two absorbing states
    std::vector<std::vector<std::uint32_t>> adj{{1, 2}, {1}, {2}};
    auto sccs = sorted_sccs(bottom_sccs(adj, {0}));
    REQUIRE(sccs.size() == 2);
    CHECK(sccs[0] == std::vector<std::uint32_t>{1});
    CHECK(sccs[1] == std::vector<std::uint32_t>{2});
    // the root is transient, so it appears in no component
    for (const auto& c : sccs) CHECK(!std::count(c.begin(), c.end(), 0u));
}

TEST_CASE("bottom_sccs handles a single absorbing root") {
    std::vector<std::vector<std::uint32_t>> adj{{0}};
    auto sccs = bottom_sccs(adj, {0});
    REQUIRE(sccs.size() == 1);
    CHECK(sccs[0] == std::vector<std::uint32_t>{0});
}

TEST_CASE("certificates pass exactly when all bottom components are even") {
    Pomdp m = qtest::load_fixture("allpri2.qpomdp");
    Policy p = parse_policy(qtest::slurp("sample.qpol"), m);
    Certificate c = check(m, p);
    CHECK(c.ok);
    REQUIRE(c.bottom_components.size() == 1);
    CHECK(c.bottom_components[0].min_priority == 2);
    REQUIRE(c.nodes.size() == 1); // staying in u visits one (state, memory) pair
    CHECK(c.nodes[0].first == 0);
    std::string txt = format_certificate(c, m, p);
    CHECK(txt.find("PASS") != std::string::npos);

    Pomdp bad = qtest::load_fixture("allpri1.qpomdp");
    Policy q = parse_policy(qtest::slurp("bad_loop.qpol"), bad);
    Certificate cb = check(bad, q);
    CHECK(!cb.ok);
    REQUIRE(cb.bottom_components.size() == 1);
    CHECK(cb.bottom_components[0].min_priority == 1);
    CHECK(format_certificate(cb, bad, q).find("FAIL") != std::string::npos);
}

TEST_CASE("check rejects policies that go undefined on reachable paths") {
    Pomdp m = qtest::load_fixture("allpri2.qpomdp");
    // go and stay are both played but only stay has an update
    Policy p = parse_policy("QPOL v1\nmem: m0\ninit: o m0\nact: m0 go stay\n"
                            "upd: m0 o stay m0\n", m);
    CHECK_THROWS_AS(check(m, p), InputError);
}

TEST_CASE("check rejects a missing initial observation mapping") {
    Pomdp m = qtest::load_fixture("e_straddle.qpomdp");
    // the first observation is os, but only oxy is mapped
    Policy p = parse_policy("QPOL v1\nmem: m0\ninit: oxy m0\nact: m0 a\n"
                            "upd: m0 oxy a m0\n", m);
    CHECK_THROWS_AS(check(m, p), InputError);
}

TEST_CASE("simulation statistics are deterministic for a fixed seed") {
    Pomdp m = qtest::load_fixture("allpri2.qpomdp");
    Policy p = parse_policy(qtest::slurp("sample.qpol"), m);
    SimStats a = simulate(m, p, 64, 100, 12345);
    SimStats b = simulate_serial(m, p, 64, 100, 12345);
    CHECK(format_sim_stats(a) == format_sim_stats(b));
    CHECK(a.episodes == 100);
    CHECK(a.steps == 64);
    REQUIRE(a.tail_min_priority.count(2));
    CHECK(a.tail_min_priority.at(2) == 100);
    CHECK(a.final_priority.at(2) == 100);
    REQUIRE(a.lock_step.count(0));
    CHECK(a.lock_step.at(0) == 100); // the only memory claims from the start

    SimStats c = simulate(m, p, 64, 100, 999);
    CHECK(c.episodes == 100); // different seed still runs every episode
}
