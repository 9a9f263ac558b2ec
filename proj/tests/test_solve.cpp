#include <string>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "qpomdp/error.hpp"
#include "qpomdp/objective.hpp"
#include "qpomdp/solve.hpp"
#include "qpomdp/verify.hpp"

using namespace qpomdp;

namespace {

Objective parity() { return Objective{}; }

Objective kindsets(ObjectiveKind k,
                   std::vector<std::pair<std::string, std::vector<std::string>>> sets) {
    Objective o;
    o.kind = k;
    o.sets = std::move(sets);
    return o;
}

SolveOutput run(const char* fixture, const Objective& o) {
    return solve(qtest::load_fixture(fixture), o, Caps{});
}

} // namespace

TEST_CASE("parity verdicts on the bundled fixtures") {
    CHECK(run("tiny.qpomdp", parity()).solution.verdict == Verdict::AlmostSure);
    CHECK(run("allpri2.qpomdp", parity()).solution.verdict == Verdict::AlmostSure);
    CHECK(run("allpri1.qpomdp", parity()).solution.verdict == Verdict::NotFoundInClass);
    CHECK(run("e_straddle.qpomdp", parity()).solution.verdict == Verdict::AlmostSure);
    CHECK(run("e_trap.qpomdp", parity()).solution.verdict == Verdict::NotFoundInClass);
}

TEST_CASE("winning straddle runs claim the even half of the support") {
    SolveOutput out = run("e_straddle.qpomdp", parity());
    REQUIRE(out.solution.verdict == Verdict::AlmostSure);
    REQUIRE(out.policy.has_value());
    CHECK(out.prep.reduce_case == ReduceCase::Identity);
    CHECK(out.prep.labeled_product == false);
    CHECK(out.prep.states_before_reduction == 3);
    CHECK(out.max_support == 2);
    CHECK(out.product_states >= 2);
    CHECK(out.product_memories >= 2);

    // the emitted witness certifies independently
    Pomdp m = qtest::load_fixture("e_straddle.qpomdp");
    Certificate c = check(m, *out.policy);
    CHECK(c.ok);
}

TEST_CASE("solve can skip policy extraction") {
    Pomdp m = qtest::load_fixture("e_straddle.qpomdp");
    SolveOutput out = solve(m, parity(), Caps{}, false);
    CHECK(out.solution.verdict == Verdict::AlmostSure);
    CHECK(!out.policy.has_value());
}

TEST_CASE("liveness takes the reach-sink reduction and wins by reaching v") {
    Objective live = parse_objective(qtest::slurp("live.qobj"));
    SolveOutput out = run("allpri1.qpomdp", live);
    CHECK(out.prep.labeled_product == true);
    CHECK(out.prep.reduce_case == ReduceCase::ReachSink);
    CHECK(out.prep.states_before_reduction == 3);
    CHECK(out.prep.model.num_states() == 4);
    CHECK(out.solution.verdict == Verdict::AlmostSure);
}

TEST_CASE("an equivalent hand-rolled automaton stays on the identity path") {
    Objective reach = parse_objective(qtest::slurp("reach_v.qobj"));
    SolveOutput out = run("allpri1.qpomdp", reach);
    CHECK(out.prep.labeled_product == true);
    CHECK(out.prep.reduce_case == ReduceCase::Identity);
    CHECK(out.prep.states_before_reduction == 3);
    CHECK(out.prep.model.num_states() == 3);
    CHECK(out.solution.verdict == Verdict::AlmostSure);
}

TEST_CASE("safety wins iff the stay region contains the start") {
    SolveOutput ok = run("allpri1.qpomdp", kindsets(ObjectiveKind::Safety, {{"T", {"u"}}}));
    CHECK(ok.solution.verdict == Verdict::AlmostSure);
    SolveOutput bad = run("allpri1.qpomdp", kindsets(ObjectiveKind::Safety, {{"T", {"v"}}}));
    CHECK(bad.solution.verdict == Verdict::NotFoundInClass);
}

TEST_CASE("sequencing and coverage reduce, recurrence solves parity directly") {
    SolveOutput seq = run("allpri1.qpomdp",
                          kindsets(ObjectiveKind::Sequencing, {{"S1", {"v"}}, {"S2", {"u"}}}));
    CHECK(seq.prep.reduce_case == ReduceCase::ReachSink);
    CHECK(seq.solution.verdict == Verdict::AlmostSure);

    SolveOutput cov = run("allpri1.qpomdp",
                          kindsets(ObjectiveKind::Coverage, {{"S1", {"u"}}, {"S2", {"v"}}}));
    CHECK(cov.prep.reduce_case == ReduceCase::ReachSink);
    CHECK(cov.solution.verdict == Verdict::AlmostSure);

    SolveOutput rec = run("allpri1.qpomdp",
                          kindsets(ObjectiveKind::Recurrence, {{"R1", {"u"}}, {"R2", {"v"}}}));
    CHECK(rec.prep.reduce_case == ReduceCase::Unsupported);
    CHECK(rec.solution.verdict == Verdict::AlmostSure);

    // with one recurrence set every step reads R1 or F1, so the unvisited
    // empty-progress state drops out and the product lands back in {1,2}
    SolveOutput ra = run("allpri1.qpomdp", kindsets(ObjectiveKind::RecurrenceAvoid,
                                                    {{"R1", {"u"}}, {"F1", {"v"}}}));
    CHECK(ra.prep.reduce_case == ReduceCase::Identity);
    CHECK(ra.solution.verdict == Verdict::AlmostSure);
}

TEST_CASE("direct parity handles an open even region") {
    Pomdp m = qtest::load_fixture("allpri2.qpomdp");
    m.priority = {2, 3}; // staying on u wins, the region is open via go
    SolveOutput out = solve(m, parity(), Caps{});
    CHECK(out.prep.reduce_case == ReduceCase::Unsupported);
    CHECK(out.solution.verdict == Verdict::AlmostSure);

    Pomdp trap = qtest::load_fixture("e_trap.qpomdp");
    trap.priority = {3, 2, 1}; // three priorities, the coin still decides
    SolveOutput lost = solve(trap, parity(), Caps{});
    CHECK(lost.prep.reduce_case == ReduceCase::Unsupported);
    CHECK(lost.solution.verdict == Verdict::NotFoundInClass);
}

TEST_CASE("caps propagate out of the pipeline") {
    Pomdp m = qtest::load_fixture("e_straddle.qpomdp");
    Caps tight;
    tight.max_supports = 1;
    CHECK_THROWS_AS(solve(m, parity(), tight), CapError);
}

TEST_CASE("safe cores claim only states that can hold their level") {
    Pomdp m = qtest::load_fixture("e_straddle.qpomdp");
    BeliefObsPomdp g = build_product(m, Caps{});
    Solution sol = almost_sure_win(g, Caps{});
    REQUIRE(sol.verdict == Verdict::AlmostSure);
    REQUIRE(sol.winning_mem.size() == g.num_memories());
    // the lose sink is never winning
    CHECK(!sol.winning_mem[g.lose_mem]);
    for (MemId mid : g.initial_memories) CHECK(sol.winning_mem[mid]);

    CoreResult core = safe_core(g, sol.winning_mem, 2);
    bool some_core = false;
    for (MemId mid = 0; mid < g.num_memories(); ++mid) {
        if (!core.in_core_mem[mid]) continue;
        some_core = true;
        CHECK(sol.winning_mem[mid]);
        CHECK(g.memories[mid].level == 2);
        CHECK(!core.actions[mid].empty());
    }
    CHECK(some_core);
}
