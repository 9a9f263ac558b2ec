#include <cstdint>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "qpomdp/error.hpp"
#include "qpomdp/model.hpp"
#include "qpomdp/util.hpp"

using namespace qpomdp;

TEST_CASE("fixture models validate cleanly") {
    for (const char* f : {"tiny.qpomdp", "e_straddle.qpomdp", "e_trap.qpomdp",
                          "allpri1.qpomdp", "allpri2.qpomdp"}) {
        CAPTURE(f);
        Pomdp m = qtest::load_fixture(f);
        CHECK(m.validate().empty());
    }
}

TEST_CASE("validate reports structural problems") {
    const Pomdp m = qtest::load_fixture("tiny.qpomdp");

    Pomdp broken = m;
    broken.priority[0] = -1;
    CHECK(!broken.validate().empty());
    CHECK_THROWS_AS(broken.ensure_valid(), InputError);

    broken = m;
    broken.trans[0][0][0].p = Prob::from_ratio(1, 2);
    CHECK(!broken.validate().empty()); // row no longer sums to one

    broken = m;
    broken.obs_of[0] = 5;
    CHECK(!broken.validate().empty()); // observation id out of range

    broken = m;
    broken.initial.clear();
    CHECK(!broken.validate().empty());

    broken = m;
    broken.trans[0][0].clear();
    CHECK(!broken.validate().empty()); // action without transitions
}

TEST_CASE("belief updates split supports by observation") {
    Pomdp m = qtest::load_fixture("e_straddle.qpomdp");
    // ids: states s=0 x=1 y=2, observations os=0 oxy=1, single action 0
    auto u = belief_update(m, {0}, 0, 1);
    REQUIRE(u.has_value());
    CHECK(*u == Support{1, 2});
    CHECK(!belief_update(m, {0}, 0, 0).has_value()); // nothing returns to os
    auto v = belief_update(m, {1, 2}, 0, 1);
    REQUIRE(v.has_value());
    CHECK(*v == Support{1, 2}); // the straddling support is stable
}

TEST_CASE("reachable supports enumerate in order and respect the cap") {
    Pomdp m = qtest::load_fixture("e_straddle.qpomdp");
    auto sup = reachable_belief_supports(m, 1u << 10);
    REQUIRE(sup.size() == 2);
    CHECK(sup[0] == Support{0});
    CHECK(sup[1] == Support{1, 2});
    CHECK(max_observation_size(sup) == 2);
    CHECK_THROWS_AS(reachable_belief_supports(m, 1), CapError);

    auto from = reachable_belief_supports_from(m, Support{1, 2}, 1u << 10);
    REQUIRE(from.size() == 1);
    CHECK(from[0] == Support{1, 2});
}

namespace {

const char* kSetsModel = R"(QPOMDP v1
states: p q r
actions: a
observations: red green
obs: p red
obs: q red green
obs: r green
start: p 1
T: p a q 1
T: q a r 1
T: r a p 1
priority: p 2
priority: q 2
priority: r 2
)";

const char* kDistModel = R"(QPOMDP v1
states: p q
actions: a
observations: red green
obs: p red 1/2
obs: p green 1/2
obs: q green 1
start: p 1
T: p a q 1
T: q a p 1
priority: p 2
priority: q 1
)";

} // namespace

TEST_CASE("set-valued observations become the subset alphabet") {
    GeneralPomdp g = parse_model(kSetsModel);
    CHECK(g.obs.kind == GeneralObs::Sets);
    Pomdp m = normalize_observations(g);
    REQUIRE(m.num_states() == 3);
    CHECK(m.obs_names.size() == 3); // three distinct signature sets
    CHECK(m.obs_of[0] != m.obs_of[1]);
    CHECK(m.obs_of[1] != m.obs_of[2]);
    CHECK(m.obs_of[0] != m.obs_of[2]);
    CHECK(m.obs_names[m.obs_of[1]] == "red_green");
    CHECK(m.validate().empty());
}

TEST_CASE("randomized observations split states into copies") {
    GeneralPomdp g = parse_model(kDistModel);
    CHECK(g.obs.kind == GeneralObs::Dists);
    Pomdp m = normalize_observations(g);
    REQUIRE(m.num_states() == 3); // p emits two symbols, q one
    CHECK(m.state_names[0] == "p__red");
    CHECK(m.state_names[1] == "p__green");
    CHECK(m.state_names[2] == "q__green");
    CHECK(m.validate().empty());
    for (StateId s : {StateId(0), StateId(1)}) {
        REQUIRE(m.trans[s][0].size() == 1);
        CHECK(m.trans[s][0][0].to == 2);
        CHECK(m.trans[s][0][0].p.is_one());
    }
    REQUIRE(m.trans[2][0].size() == 2);
    CHECK(m.trans[2][0][0].p == Prob::from_ratio(1, 2));
    CHECK(m.trans[2][0][1].p == Prob::from_ratio(1, 2));
    // the initial distribution splits with the emission probabilities
    REQUIRE(m.initial.size() == 2);
    CHECK(m.initial[0].p == Prob::from_ratio(1, 2));
    // priorities and labels ride along
    CHECK(m.priority[0] == 2);
    CHECK(m.priority[2] == 1);
}

TEST_CASE("prune_unused_observations renumbers densely") {
    Pomdp m = qtest::load_fixture("tiny.qpomdp");
    m.obs_names.push_back("phantom");
    prune_unused_observations(m);
    CHECK(m.obs_names == std::vector<std::string>{"o"});
    CHECK(m.obs_of[0] == 0);
    CHECK(m.validate().empty());
}

TEST_CASE("splitmix64 is a deterministic stream") {
    std::uint64_t a = 42, b = 42;
    for (int i = 0; i < 8; ++i) CHECK(splitmix64(a) == splitmix64(b));
    std::uint64_t c = 42, d = 43;
    CHECK(splitmix64(c) != splitmix64(d));
}
