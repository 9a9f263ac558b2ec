#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "qpomdp/error.hpp"
#include "qpomdp/objective.hpp"
#include "qpomdp/product.hpp"

using namespace qpomdp;

namespace {

Objective live_on(const char* state) {
    Objective o;
    o.kind = ObjectiveKind::Liveness;
    o.sets = {{"T", {state}}};
    return o;
}

} // namespace

TEST_CASE("automaton product reads the entered state's label") {
    Pomdp m = qtest::load_fixture("allpri1.qpomdp"); // u -go-> v; model priorities ignored
    Objective o = live_on("v");
    Pomdp lm = label_states(m, o);
    Pomdp prod = automaton_product(lm, build_automaton(o), Caps{});
    REQUIRE(prod.num_states() == 3);
    std::multiset<int> pris(prod.priority.begin(), prod.priority.end());
    CHECK(pris == std::multiset<int>{2, 2, 3});
    CHECK(prod.num_obs() == 1); // the automaton run stays hidden

    REQUIRE(prod.initial.size() == 1);
    StateId s0 = prod.initial[0].to;
    CHECK(prod.priority[s0] == 3); // u is unlabeled, the run starts fresh

    // go enters v; the label is read on entry, so the target is already accepting
    ActionId go = 0;
    REQUIRE(prod.trans[s0][go].size() == 1);
    CHECK(prod.priority[prod.trans[s0][go][0].to] == 2);
}

TEST_CASE("a labeled initial state is read before the first step") {
    Pomdp m = qtest::load_fixture("allpri1.qpomdp");
    Objective o = live_on("u"); // label the initial state itself
    Pomdp lm = label_states(m, o);
    Pomdp prod = automaton_product(lm, build_automaton(o), Caps{});
    REQUIRE(prod.initial.size() == 1);
    CHECK(prod.priority[prod.initial[0].to] == 2);
}

TEST_CASE("automaton product respects the state cap") {
    Pomdp m = qtest::load_fixture("allpri1.qpomdp");
    Objective o = live_on("v");
    Pomdp lm = label_states(m, o);
    Caps caps;
    caps.max_product_states = 2;
    CHECK_THROWS_AS(automaton_product(lm, build_automaton(o), caps), CapError);
}

TEST_CASE("normalize_priorities compacts and merges same-parity runs") {
    Pomdp m = qtest::load_fixture("e_trap.qpomdp"); // priorities 2,2,1
    auto remap = normalize_priorities(m);
    CHECK(remap == std::map<int, int>{{1, 1}, {2, 2}});

    Pomdp two = qtest::load_fixture("allpri2.qpomdp");
    two.priority = {4, 6};
    CHECK(normalize_priorities(two) == std::map<int, int>{{4, 2}, {6, 2}});
    CHECK(two.priority == std::vector<int>{2, 2});

    Pomdp odd = qtest::load_fixture("allpri2.qpomdp");
    odd.priority = {3, 5};
    CHECK(normalize_priorities(odd) == std::map<int, int>{{3, 1}, {5, 1}});

    Pomdp mixed = qtest::load_fixture("allpri2.qpomdp");
    mixed.priority = {3, 6};
    CHECK(normalize_priorities(mixed) == std::map<int, int>{{3, 1}, {6, 2}});
}

TEST_CASE("reduction keeps coBüchi inputs, adds one sink to reach shapes") {
    Pomdp cob = qtest::load_fixture("e_trap.qpomdp");
    Reduction r = reduce_to_cobuchi(cob);
    CHECK(r.kase == ReduceCase::Identity);
    CHECK(r.model.num_states() == cob.num_states());

    Objective o = live_on("v");
    Pomdp lm = label_states(qtest::load_fixture("allpri1.qpomdp"), o);
    Pomdp prod = automaton_product(lm, build_automaton(o), Caps{});
    normalize_priorities(prod);
    Reduction rs = reduce_to_cobuchi(prod);
    CHECK(rs.kase == ReduceCase::ReachSink);
    CHECK(rs.model.num_states() == prod.num_states() + 1);
    std::multiset<int> pris(rs.model.priority.begin(), rs.model.priority.end());
    CHECK(pris == std::multiset<int>{1, 2, 2, 2});
    rs.model.ensure_valid();

    Pomdp open_region = qtest::load_fixture("allpri2.qpomdp");
    open_region.priority = {2, 3}; // u -go-> v leaves the even region
    CHECK(reduce_to_cobuchi(open_region).kase == ReduceCase::Unsupported);
}

TEST_CASE("belief product memories carry consistent supports and claims") {
    Pomdp m = qtest::load_fixture("e_straddle.qpomdp");
    BeliefObsPomdp g = build_product(m, Caps{});

    CHECK(g.base == &m);
    CHECK(g.lose_mem == 0);
    CHECK(g.odd_transient == 3); // first odd value above every model priority
    REQUIRE(g.num_memories() >= 2);
    REQUIRE(g.num_states() >= 2);
    CHECK(g.phat[0] == 1); // the lose sink is odd

    // one initial observation class, support {s}
    REQUIRE(g.initial_memories.size() == 1);
    MemId m0 = g.initial_memories[0];
    CHECK(g.memories[m0].y == Support{0});
    REQUIRE(g.initial_states.size() == 1);
    CHECK(g.base_state[g.initial_states[0]] == 0);
    CHECK(g.memory_of[g.initial_states[0]] == m0);

    bool saw_straddle = false;
    for (MemId mid = 1; mid < g.num_memories(); ++mid) {
        const MemoryElement& me = g.memories[mid];
        CHECK(!me.y.empty());
        CHECK(std::includes(me.y.begin(), me.y.end(), me.b.begin(), me.b.end()));
        CHECK(me.level % 2 == 0);
        CHECK((me.level == 0) == me.b.empty());
        if (me.y == Support{1, 2}) saw_straddle = true;

        REQUIRE(g.states_of[mid].size() == me.y.size());
        for (std::size_t i = 0; i < me.y.size(); ++i) {
            ProdId pid = g.states_of[mid][i];
            StateId s = me.y[i];
            CHECK(g.base_state[pid] == s);
            CHECK(g.memory_of[pid] == mid);
            bool claimed = std::binary_search(me.b.begin(), me.b.end(), s);
            CHECK(g.phat[pid] == (claimed ? m.priority[s] : g.odd_transient));
            CHECK(g.state_of(mid, s) == pid);
        }
    }
    CHECK(saw_straddle);
}

TEST_CASE("belief product branches agree with belief updates") {
    Pomdp m = qtest::load_fixture("e_straddle.qpomdp");
    BeliefObsPomdp g = build_product(m, Caps{});
    for (MemId mid = 1; mid < g.num_memories(); ++mid) {
        const MemoryElement& me = g.memories[mid];
        REQUIRE(g.branches[mid].size() == m.num_actions());
        for (ActionId a = 0; a < m.num_actions(); ++a) {
            for (const Branch& br : g.branches[mid][a]) {
                auto upd = belief_update(m, me.y, a, br.z);
                REQUIRE(upd.has_value());
                CHECK(*upd == br.y_next);
                CHECK(std::includes(br.y_next.begin(), br.y_next.end(), br.k.begin(),
                                    br.k.end()));
                for (MemId nxt : br.menu) {
                    CHECK(g.memories[nxt].y == br.y_next);
                }
                if (!br.menu.empty()) {
                    // menu[0] keeps the closure claim (or resets when it is empty)
                    CHECK(g.memories[br.menu[0]].b == br.k);
                }
            }
        }
    }
}

TEST_CASE("belief product respects caps") {
    Pomdp m = qtest::load_fixture("e_straddle.qpomdp");
    Caps tight;
    tight.max_supports = 1;
    CHECK_THROWS_AS(build_product(m, tight), CapError);
    Caps tiny;
    tiny.max_product_states = 1;
    CHECK_THROWS_AS(build_product(m, tiny), CapError);
}

TEST_CASE("the product dump is a well-formed model") {
    Pomdp m = qtest::load_fixture("e_straddle.qpomdp");
    BeliefObsPomdp g = build_product(m, Caps{});
    Pomdp dump = dump_product_model(g);
    CHECK(dump.validate().empty());
    CHECK(dump.num_states() == g.num_states());
}
