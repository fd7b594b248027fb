#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "dynlis/script.hpp"

using namespace dynlis;

TEST_CASE("parse round trip") {
    std::string text = "P 3 1 2\nQ 0 2\nI 1 7\nD 0\nQC 0 2\n";
    std::istringstream in(text);
    auto script = parse_script(in);
    CHECK(script.preload == std::vector<int64_t>({3, 1, 2}));
    REQUIRE(script.ops.size() == 4);
    CHECK(script.ops[0].kind == ScriptOp::Kind::Query);
    CHECK(script.ops[1].kind == ScriptOp::Kind::Insert);
    CHECK(script.ops[1].a == 1);
    CHECK(script.ops[1].b == 7);
    CHECK(script.ops[2].kind == ScriptOp::Kind::Delete);
    CHECK(script.ops[3].kind == ScriptOp::Kind::QueryChain);
    CHECK(format_script(script) == text);
}

TEST_CASE("parse errors carry line numbers") {
    auto expect_error_line = [](const std::string& text, int line) {
        std::istringstream in(text);
        try {
            parse_script(in);
            FAIL("expected ScriptParseError");
        } catch (const ScriptParseError& e) {
            CHECK(e.line() == line);
        }
    };
    expect_error_line("Q 0\n", 1);
    expect_error_line("I 0 1\nX 2\n", 2);
    expect_error_line("D 1 2\n", 1);
    expect_error_line("I 0 1\nP 1 2\n", 2);  // preload not first
    expect_error_line("Q 0 1 2\n", 1);
}

TEST_CASE("blank lines and empty scripts") {
    std::istringstream in("\n\nQ 0 0\n\n");
    auto script = parse_script(in);
    CHECK(script.preload.empty());
    CHECK(script.ops.size() == 1);
    std::istringstream empty("");
    CHECK(parse_script(empty).ops.empty());
}

TEST_CASE("has_inserts") {
    std::istringstream a("D 0\nQ 0 0\n");
    CHECK(!parse_script(a).has_inserts());
    std::istringstream b("I 0 5\n");
    CHECK(parse_script(b).has_inserts());
}
