#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "dynlis/core.hpp"
#include "dynlis/cover.hpp"
#include "dynlis/oracle.hpp"
#include "dynlis/rng.hpp"

using namespace dynlis;

namespace {

PointSet ascending(int n) {
    PointSet ps;
    for (Coord i = 0; i < n; ++i) ps.points.push_back({i, i});
    return ps;
}

std::vector<std::pair<Coord, Coord>> intervals(const std::vector<Segment>& segs) {
    std::vector<std::pair<Coord, Coord>> out;
    for (const auto& s : segs) out.emplace_back(s.begin, s.end);
    return out;
}

// Exact LIS of the points with x in [i, j].
int64_t window_opt(const PointSet& ps, Coord i, Coord j) {
    PointSet w;
    for (const Point& p : ps.points)
        if (p.x >= i && p.x <= j) w.points.push_back(p);
    return oracle::lis_dp(w);
}

}  // namespace

TEST_CASE("exact cover on a sorted array: the staircase") {
    auto segs = cover_exact(ascending(6), 3);
    CHECK(intervals(segs) ==
          std::vector<std::pair<Coord, Coord>>({{0, 2}, {1, 3}, {2, 4}, {3, 5}}));
    CHECK(depth(segs) == 3);
    CHECK(oracle::validate_cover(ascending(6), segs, 3, 3));
}

TEST_CASE("1-cover is the set of all elements") {
    Rng rng(2);
    auto ps = normalize(rng.permutation(17));
    auto segs = cover_exact(ps, 1);
    REQUIRE(segs.size() == 17);
    for (size_t i = 0; i < segs.size(); ++i) {
        CHECK(segs[i].begin == Coord(i));
        CHECK(segs[i].end == Coord(i));
        CHECK(segs[i].score() == 1);
    }
}

TEST_CASE("k beyond the LIS yields an empty cover") {
    PointSet rev;
    for (Coord i = 0; i < 10; ++i) rev.points.push_back({i, Coord(9 - i)});
    CHECK(cover_exact(rev, 2).empty());
    Rng rng(3);
    auto ps = normalize(rng.permutation(30));
    CHECK(cover_exact(ps, oracle::lis_dp(ps) + 1).empty());
    CHECK(cover_approx(ps, oracle::lis_dp(ps) + 1, oracle::lis_dp(ps) + 4).empty());
}

TEST_CASE("approximate cover on a sorted array") {
    auto segs = cover_approx(ascending(8), 2, 4);
    CHECK(intervals(segs) == std::vector<std::pair<Coord, Coord>>({{2, 3}, {4, 5}, {6, 7}}));
    CHECK(depth(segs) == 1);  // floor(k1 / (k2-k1))
}

TEST_CASE("depth: disjoint and staircase") {
    std::vector<Segment> disjoint;
    for (Coord i = 0; i < 5; ++i) {
        Segment s;
        s.begin = i * 10;
        s.end = i * 10 + 4;
        s.chain = {{s.begin, 0}, {s.end, 1}};
        disjoint.push_back(s);
    }
    CHECK(depth(disjoint) == 1);

    // k staircase intervals each overlapping the next; cross-check against
    // per-coordinate counting.
    std::vector<Segment> stairs;
    for (Coord i = 0; i < 7; ++i) {
        Segment s;
        s.begin = i;
        s.end = i + 3;
        s.chain = {{s.begin, 0}, {s.end, 1}};
        stairs.push_back(s);
    }
    int64_t brute = 0;
    for (Coord x = 0; x <= 10; ++x) {
        int64_t c = 0;
        for (auto& s : stairs) c += (s.begin <= x && x <= s.end) ? 1 : 0;
        brute = std::max(brute, c);
    }
    CHECK(depth(stairs) == brute);
    CHECK(depth({}) == 0);
}

TEST_CASE("exhaustive validator over small instances, all feasible parameters") {
    Rng rng(41);
    for (int iter = 0; iter < 60; ++iter) {
        int n = 4 + int(rng.below(13));  // up to 16
        auto ps = normalize(rng.permutation(size_t(n)));
        int64_t lis = oracle::lis_dp(ps);
        for (int64_t k = 1; k <= lis; ++k) {
            auto segs = cover_exact(ps, k);
            auto verdict = oracle::validate_cover(ps, segs, k, k);
            INFO(verdict.message);
            CHECK(verdict.ok);
            CHECK(depth(segs) <= k);
        }
        for (int64_t k2 = 2; k2 <= lis; ++k2) {
            for (int64_t k1 = 1; k1 < k2; ++k1) {
                auto segs = cover_approx(ps, k1, k2);
                auto verdict = oracle::validate_cover(ps, segs, k1, k2);
                INFO(verdict.message);
                CHECK(verdict.ok);
                CHECK(depth(segs) * (k2 - k1) <= k1);
            }
        }
    }
}

TEST_CASE("covers keep begins strictly increasing (monotone shift)") {
    Rng rng(17);
    for (int iter = 0; iter < 40; ++iter) {
        auto ps = normalize(rng.permutation(48));
        int64_t lis = oracle::lis_dp(ps);
        for (int64_t k = 2; k <= lis; k += 2) {
            for (auto* segs : {new auto(cover_exact(ps, k)), new auto(cover_approx(ps, (k + 1) / 2, k))}) {
                for (size_t i = 1; i < segs->size(); ++i) {
                    CHECK((*segs)[i].begin > (*segs)[i - 1].begin);
                    CHECK((*segs)[i].end > (*segs)[i - 1].end);
                }
                delete segs;
            }
        }
    }
}

TEST_CASE("covering family: r=0 answers every interval exactly") {
    Rng rng(4242);
    auto ps = normalize(rng.permutation(16));
    CoveringFamily fam(ps, 1.5, 0);
    for (Coord i = 0; i < 16; ++i)
        for (Coord j = i; j < 16; ++j) CHECK(fam.query(i, j).score == window_opt(ps, i, j));
}

TEST_CASE("covering family: gamma^r sandwich on random instances") {
    Rng rng(777);
    for (double gamma : {1.25, 1.5}) {
        for (int r : {2, 3}) {
            auto ps = normalize(rng.permutation(256));
            CoveringFamily fam(ps, gamma, r);
            double factor = std::pow(gamma, r);
            for (int t = 0; t < 100; ++t) {
                Coord i = Coord(rng.below(256));
                Coord j = Coord(i + rng.below(size_t(256 - i)));
                int64_t opt = window_opt(ps, i, j);
                auto q = fam.query(i, j);
                CHECK(q.score <= opt);
                CHECK(double(q.score) * factor >= double(opt) - 1e-9);
                if (q.score > 0) {
                    REQUIRE(q.segment != nullptr);
                    CHECK(q.segment->begin >= i);
                    CHECK(q.segment->end <= j);
                }
            }
        }
    }
}

TEST_CASE("covering family: small point sets stay exact") {
    // With n below the exact-level threshold every level is an i-cover.
    Rng rng(12);
    auto ps = normalize(rng.permutation(10));
    CoveringFamily fam(ps, 1.25, 2);  // ceil(3/(gamma-1)) = 12 >= n
    for (Coord i = 0; i < 10; ++i)
        for (Coord j = i; j < 10; ++j) CHECK(fam.query(i, j).score == window_opt(ps, i, j));
}

TEST_CASE("family query: empty interval and monotone shrinking") {
    auto ps = ascending(32);
    CoveringFamily fam(ps, 1.5, 2);
    // score shrinks (weakly) as the interval shrinks on either side
    int64_t full = fam.query(0, 31).score;
    int64_t inner = fam.query(4, 27).score;
    int64_t tiny = fam.query(10, 12).score;
    CHECK(full >= inner);
    CHECK(inner >= tiny);

    PointSet sparse;
    sparse.points = {{0, 0}, {30, 1}};
    CoveringFamily fam2(sparse, 1.5, 2);
    CHECK(fam2.query(5, 20).score == 0);  // interval containing no points
    CHECK(fam2.query(5, 20).segment == nullptr);
}

TEST_CASE("gamma and r domain checks") {
    auto ps = ascending(4);
    CHECK_THROWS_AS(CoveringFamily(ps, 2.5, 2), std::invalid_argument);
    CHECK_THROWS_AS(CoveringFamily(ps, 1.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(CoveringFamily(ps, 1.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(cover_approx(ps, 3, 3), std::invalid_argument);
    CHECK_THROWS_AS(cover_exact(ps, 0), std::invalid_argument);
}
