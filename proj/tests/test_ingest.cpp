#include <cstdio>
#include <string>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "qpomdp/error.hpp"
#include "qpomdp/ingest.hpp"

using namespace qpomdp;

TEST_CASE("tokenizer strips comments and blanks but keeps line numbers") {
    auto lines = tokenize_file("a b # trailing\n\n# whole line\n  c\n");
    REQUIRE(lines.size() == 2);
    CHECK(lines[0].toks == std::vector<std::string>{"a", "b"});
    CHECK(lines[0].lineno == 1);
    CHECK(lines[1].toks == std::vector<std::string>{"c"});
    CHECK(lines[1].lineno == 4);
}

TEST_CASE("is_identifier") {
    CHECK(is_identifier("abc_123"));
    CHECK(is_identifier("_"));
    CHECK(!is_identifier(""));
    CHECK(!is_identifier("a-b"));
    CHECK(!is_identifier("a b"));
}

TEST_CASE("write after load is canonical and stable") {
    for (const char* f : {"tiny.qpomdp", "e_straddle.qpomdp", "e_trap.qpomdp",
                          "allpri1.qpomdp", "allpri2.qpomdp"}) {
        CAPTURE(f);
        Pomdp m = load_model(qtest::slurp(f));
        std::string once = write_model(m);
        Pomdp back = load_model(once);
        CHECK(write_model(back) == once); // byte-identical on the second pass
        CHECK(back.state_names == m.state_names);
        CHECK(back.obs_of == m.obs_of);
        CHECK(back.priority == m.priority);
        CHECK(back.initial.size() == m.initial.size());
    }
}

TEST_CASE("parse errors carry 1-based line numbers") {
    try {
        load_model("QPOMDP v1\nstates: a\nactions: x\nobservations: o\nwat: 1\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 5);
    }

    try {
        load_model("nonsense\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
    }
}

TEST_CASE("model parser rejects common mistakes") {
    CHECK_THROWS_AS(load_model(""), ParseError);
    CHECK_THROWS_AS(load_model("QPOMDP v2\n"), ParseError);
    // missing observations section
    CHECK_THROWS_AS(load_model("QPOMDP v1\nstates: a\nactions: x\n"), ParseError);
    // unknown state in a transition
    CHECK_THROWS_AS(load_model("QPOMDP v1\nstates: a\nactions: x\nobservations: o\n"
                               "obs: a o\nstart: a 1\nT: a x b 1\npriority: a 2\n"),
                    ParseError);
    // transition probabilities that do not sum to one surface as input errors
    CHECK_THROWS_AS(load_model("QPOMDP v1\nstates: a\nactions: x\nobservations: o\n"
                               "obs: a o\nstart: a 1\nT: a x a 1/2\npriority: a 2\n"),
                    InputError);
    // duplicate declaration
    CHECK_THROWS_AS(load_model("QPOMDP v1\nstates: a a\nactions: x\nobservations: o\n"
                               "obs: a o\nstart: a 1\nT: a x a 1\npriority: a 2\n"),
                    ParseError);
}

TEST_CASE("text file helpers round-trip and report missing files") {
    std::string path = "/tmp/qpomdp_io_test.txt";
    write_text_file(path, "hello\nworld\n");
    CHECK(read_text_file(path) == "hello\nworld\n");
    std::remove(path.c_str());
    CHECK_THROWS_AS(read_text_file(path), InputError);
}
