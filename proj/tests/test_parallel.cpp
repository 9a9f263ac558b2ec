#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "qpomdp/bench.hpp"
#include "qpomdp/model.hpp"
#include "qpomdp/oracle.hpp"
#include "qpomdp/policy.hpp"
#include "qpomdp/randgen.hpp"
#include "qpomdp/solve.hpp"
#include "qpomdp/verify.hpp"

using namespace qpomdp;

// The parallel kernels must produce the same answers as the serial reference,
// not merely statistically similar ones.

TEST_CASE("parallel and serial simulation agree on a solved benchmark") {
    BenchInstance inst = generate_bench("shuttle", "small");
    SolveOutput res = solve(inst.model, inst.objective, {});
    REQUIRE(res.solution.verdict == Verdict::AlmostSure);
    REQUIRE(res.policy.has_value());

    const Pomdp& m = res.prep.model;
    SimStats par = simulate(m, *res.policy, 128, 200, 99);
    SimStats ser = simulate_serial(m, *res.policy, 128, 200, 99);
    CHECK(format_sim_stats(par) == format_sim_stats(ser));
    CHECK(par.episodes == 200);
}

TEST_CASE("parallel and serial oracle search find the same witness") {
    for (std::uint64_t seed : {1001ull, 1017ull, 1042ull, 1300ull, 1777ull}) {
        CAPTURE(seed);
        Pomdp m = random_tiny_model(seed);
        OracleResult par = oracle_decide(m, 2, {});
        OracleResult ser = oracle_decide_serial(m, 2, {});
        CHECK(par.verdict == ser.verdict);
        if (par.verdict == OracleVerdict::Yes) {
            REQUIRE(par.witness.has_value());
            REQUIRE(ser.witness.has_value());
            CHECK(write_policy(*par.witness, m) == write_policy(*ser.witness, m));
        }
    }
}

TEST_CASE("oracle agreement on the named fixtures") {
    Pomdp straddle = qtest::load_fixture("e_straddle.qpomdp");
    Pomdp trap = qtest::load_fixture("e_trap.qpomdp");
    CHECK(oracle_decide(straddle, 2, {}).verdict == OracleVerdict::Yes);
    CHECK(oracle_decide_serial(straddle, 2, {}).verdict == OracleVerdict::Yes);
    CHECK(oracle_decide(trap, 2, {}).verdict == OracleVerdict::NoWithinSpec);
    CHECK(oracle_decide_serial(trap, 2, {}).verdict == OracleVerdict::NoWithinSpec);
}

TEST_CASE("suite rows come out identical with one worker or two") {
    std::vector<std::pair<std::string, std::string>> rows{{"shuttle", "small"},
                                                          {"cheese", "small_easy"},
                                                          {"cheese", "small_hard"}};
    auto serial = run_suite(rows, 60, 1);
    auto parallel = run_suite(rows, 60, 2);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CAPTURE(i);
        CHECK(serial[i].family == parallel[i].family);
        CHECK(serial[i].variant == parallel[i].variant);
        CHECK(serial[i].states == parallel[i].states);
        CHECK(serial[i].states_after == parallel[i].states_after);
        CHECK(serial[i].verdict == parallel[i].verdict);
        CHECK(serial[i].verified == parallel[i].verified);
        CHECK(serial[i].product_states == parallel[i].product_states);
        CHECK(serial[i].max_support == parallel[i].max_support);
    }
}
