#include <cstdint>
#include <string>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "qpomdp/bench.hpp"
#include "qpomdp/error.hpp"
#include "qpomdp/oracle.hpp"
#include "qpomdp/randgen.hpp"
#include "qpomdp/solve.hpp"
#include "qpomdp/verify.hpp"

using namespace qpomdp;

TEST_CASE("one memory suffices for the straddle model") {
    Pomdp m = qtest::load_fixture("e_straddle.qpomdp");
    OracleResult r = oracle_decide(m, 1, Caps{});
    CHECK(r.verdict == OracleVerdict::Yes);
    REQUIRE(r.witness.has_value());
    CHECK(r.witness->num_memories() == 1);
    CHECK(check(m, *r.witness).ok);
    CHECK(r.policies_checked >= 1);
}

TEST_CASE("no finite-memory policy escapes the trap") {
    Pomdp m = qtest::load_fixture("e_trap.qpomdp");
    OracleResult r = oracle_decide(m, 2, Caps{});
    CHECK(r.verdict == OracleVerdict::NoWithinSpec);
    CHECK(!r.witness.has_value());
    CHECK(r.policies_checked > 0);
}

TEST_CASE("all-odd models are hopeless") {
    Pomdp m = qtest::load_fixture("allpri1.qpomdp");
    CHECK(oracle_decide(m, 2, Caps{}).verdict == OracleVerdict::NoWithinSpec);
}

TEST_CASE("serial and parallel searches return the same first witness") {
    Pomdp m = qtest::load_fixture("allpri2.qpomdp");
    OracleResult serial = oracle_decide_serial(m, 2, Caps{});
    OracleResult parallel = oracle_decide(m, 2, Caps{});
    REQUIRE(serial.verdict == OracleVerdict::Yes);
    REQUIRE(parallel.verdict == OracleVerdict::Yes);
    REQUIRE(serial.witness.has_value());
    REQUIRE(parallel.witness.has_value());
    // first in canonical order: one memory playing the first action alone
    CHECK(serial.witness->num_memories() == 1);
    CHECK(serial.witness->act[0] == std::vector<ActionId>{0});
    CHECK(write_policy(*serial.witness, m) == write_policy(*parallel.witness, m));
}

TEST_CASE("oracle rejects inputs beyond its class") {
    Pomdp big = generate_bench("shuttle", "small").model; // 11 states
    CHECK_THROWS_AS(oracle_decide(big, 1, Caps{}), CapError);
    Pomdp m = qtest::load_fixture("e_straddle.qpomdp");
    CHECK_THROWS_AS(oracle_decide(m, 4, Caps{}), CapError);
}

TEST_CASE("the node budget is enforced") {
    Pomdp m = qtest::load_fixture("e_trap.qpomdp");
    Caps caps;
    caps.oracle_nodes = 1;
    CHECK_THROWS_AS(oracle_decide(m, 2, caps), CapError);
}

TEST_CASE("random tiny models stay within the brute-force class") {
    for (std::uint64_t seed : {1000, 1234, 4242}) {
        CAPTURE(seed);
        Pomdp m = random_tiny_model(seed);
        CHECK(m.validate().empty());
        CHECK(m.num_states() <= 6);
        CHECK(m.num_actions() <= 2);
        CHECK(m.num_obs() <= 3);
        for (int p : m.priority) {
            CHECK(p >= 1);
            CHECK(p <= 3);
        }
        for (auto& per_state : m.trans)
            for (auto& row : per_state)
                for (auto& e : row) CHECK(e.p.exact());
    }
    CHECK(write_model(random_tiny_model(77)) == write_model(random_tiny_model(77)));
}

TEST_CASE("bundled corpus manifest spot checks") {
    std::string manifest;
    try {
        manifest = qtest::slurp("corpus/manifest.csv");
    } catch (const InputError&) {
        FAIL("agreement corpus missing; regenerate it with the gencorpus tool");
        return;
    }
    std::vector<std::vector<std::string>> rows;
    std::size_t start = manifest.find('\n') + 1; // skip the header
    while (start < manifest.size()) {
        std::size_t end = manifest.find('\n', start);
        if (end == std::string::npos) end = manifest.size();
        std::string line = manifest.substr(start, end - start);
        start = end + 1;
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::size_t p = 0;
        while (true) {
            std::size_t c = line.find(',', p);
            if (c == std::string::npos) {
                cells.push_back(line.substr(p));
                break;
            }
            cells.push_back(line.substr(p, c - p));
            p = c + 1;
        }
        REQUIRE(cells.size() == 4);
        rows.push_back(std::move(cells));
    }
    REQUIRE(rows.size() >= 500);

    Objective parity;
    int checked = 0;
    for (std::size_t i = 0; i < rows.size(); i += 83) {
        const auto& r = rows[i];
        CAPTURE(r[0]);
        Pomdp m = qtest::load_fixture("corpus/" + r[0]);
        // the stored file must be the canonical bytes for its seed
        CHECK(write_model(m) == write_model(random_tiny_model(std::stoull(r[1]))));
        OracleResult ground = oracle_decide(m, 3, Caps{});
        CHECK((ground.verdict == OracleVerdict::Yes ? "YES" : "NO") == r[2]);
        SolveOutput out = solve(m, parity, Caps{}, false);
        CHECK((out.solution.verdict == Verdict::AlmostSure ? "YES" : "NO") == r[3]);
        ++checked;
    }
    CHECK(checked >= 6);
}
