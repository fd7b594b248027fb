#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "dynlis/core.hpp"
#include "dynlis/cover.hpp"
#include "dynlis/oracle.hpp"
#include "dynlis/rng.hpp"

using namespace dynlis;

TEST_CASE("lis_dp basics") {
    std::vector<int64_t> asc{1, 2, 3, 4, 5};
    std::vector<int64_t> desc{5, 4, 3, 2, 1};
    CHECK(oracle::lis_dp(asc) == 5);
    CHECK(oracle::lis_dp(desc) == 1);
    CHECK(oracle::lis_dp(std::vector<int64_t>{}) == 0);
}

TEST_CASE("lis_dp and lis_ref agree on random arrays with ties") {
    Rng rng(31337);
    for (int iter = 0; iter < 2000; ++iter) {
        size_t n = rng.below(80);
        std::vector<int64_t> vals(n);
        for (auto& v : vals) v = rng.range(-5, 40);
        int64_t a = oracle::lis_dp(vals);
        CHECK(a == oracle::lis_ref(vals));
        CHECK(a == lis_static(normalize(vals)).length);
    }
}

TEST_CASE("validate_cover accepts an empty cover over chain-free input") {
    PointSet rev;
    for (Coord i = 0; i < 6; ++i) rev.points.push_back({i, Coord(5 - i)});
    CHECK(oracle::validate_cover(rev, {}, 2, 2));
}

TEST_CASE("validate_cover rejects a cover with a segment removed") {
    Rng rng(8);
    auto ps = normalize(rng.permutation(24));
    int64_t k = std::max<int64_t>(2, oracle::lis_dp(ps) / 2);
    auto segs = cover_exact(ps, k);
    REQUIRE(segs.size() >= 2);
    auto broken = segs;
    broken.erase(broken.begin() + long(broken.size() / 2));
    auto verdict = oracle::validate_cover(ps, broken, k, k);
    CHECK(!verdict.ok);
    CHECK(!verdict.message.empty());
}

TEST_CASE("validate_cover rejects stale chains and inclusions") {
    PointSet ps = normalize(std::vector<int64_t>{0, 1, 2, 3});
    auto segs = cover_exact(ps, 2);
    REQUIRE(!segs.empty());
    // stale point
    auto stale = segs;
    stale[0].chain[0].y = 99;
    CHECK(!oracle::validate_cover(ps, stale, 2, 2).ok);
    // inclusion
    Segment inner;
    inner.chain = {{1, 1}, {2, 2}};
    inner.begin = 1;
    inner.end = 2;
    auto incl = segs;
    incl.push_back(inner);
    Segment outer;
    outer.chain = {{0, 0}, {1, 1}, {3, 3}};
    outer.begin = 0;
    outer.end = 3;
    incl.push_back(outer);
    CHECK(!oracle::validate_cover(ps, incl, 2, 3).ok);
}

TEST_CASE("differential run: clean scripts pass, reports are deterministic") {
    Rng rng(606);
    auto perm = rng.permutation(48);
    UpdateScript script;
    script.preload = perm;
    int64_t size = int64_t(perm.size());
    for (int t = 0; t < 120 && size > 1; ++t) {
        if (rng.below(3) == 0) {
            int64_t i = rng.range(0, size - 1);
            int64_t j = rng.range(i, size - 1);
            script.ops.push_back({rng.below(2) ? ScriptOp::Kind::Query : ScriptOp::Kind::QueryChain,
                                  i, j});
        } else {
            script.ops.push_back({ScriptOp::Kind::Delete, rng.range(0, size - 1), 0});
            --size;
        }
    }
    auto rep1 = oracle::differential_run(script, 0.5);
    INFO(rep1.message);
    CHECK(rep1.ok);
    CHECK(rep1.queries > 0);
    auto rep2 = oracle::differential_run(script, 0.5);
    CHECK(rep2.queries == rep1.queries);

    // and through the dynamic structure as well
    auto rep3 = oracle::differential_run(script, 0.5, /*force_dynamic=*/true);
    INFO(rep3.message);
    CHECK(rep3.ok);
}

TEST_CASE("differential run: an all-query script answers exactly in the exact regime") {
    Rng rng(11);
    auto perm = rng.permutation(32);
    UpdateScript script;
    script.preload = perm;
    for (int64_t i = 0; i < 32; ++i)
        for (int64_t j = i; j < 32; j += 5)
            script.ops.push_back({ScriptOp::Kind::Query, i, j});
    auto rep = oracle::differential_run(script, 1.0);
    CHECK(rep.ok);
}
