#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "dynlis/core.hpp"
#include "dynlis/oracle.hpp"
#include "dynlis/rng.hpp"

using namespace dynlis;

namespace {

std::vector<Coord> ranks_of(const PointSet& ps) {
    std::vector<Coord> out;
    for (const Point& p : ps.points) out.push_back(p.y);
    return out;
}

}  // namespace

TEST_CASE("normalize: distinct values keep rank order") {
    auto ps = normalize(std::vector<int64_t>{10, 20, 15});
    CHECK(ranks_of(ps) == std::vector<Coord>({0, 2, 1}));
}

TEST_CASE("normalize: ties make earlier elements larger") {
    auto ps = normalize(std::vector<int64_t>{5, 5, 3});
    CHECK(ranks_of(ps) == std::vector<Coord>({2, 1, 0}));
    CHECK(oracle::lis_dp(std::vector<int64_t>{5, 5, 3}) == 1);
    CHECK(lis_static(ps).length == 1);
}

TEST_CASE("normalize preserves strict LIS on random multisets") {
    Rng rng(7);
    for (int iter = 0; iter < 1000; ++iter) {
        size_t n = 1 + rng.below(60);
        std::vector<int64_t> vals(n);
        for (auto& v : vals) v = rng.range(0, int64_t(n / 2 + 1));
        auto ps = normalize(vals);
        CHECK(oracle::lis_dp(vals) == oracle::lis_dp(ps));
        CHECK(oracle::lis_dp(vals) == lis_static(ps).length);
    }
}

TEST_CASE("lis_static basics and witness validity") {
    PointSet sorted;
    for (Coord i = 0; i < 12; ++i) sorted.points.push_back({i, i});
    auto r = lis_static(sorted);
    CHECK(r.length == 12);
    CHECK(is_chain(r.chain));

    PointSet rev;
    for (Coord i = 0; i < 12; ++i) rev.points.push_back({i, Coord(11 - i)});
    CHECK(lis_static(rev).length == 1);

    auto ps = normalize(std::vector<int64_t>{3, 1, 4, 5, 9, 2, 6});
    CHECK(lis_static(ps).length == 4);

    CHECK(lis_static(PointSet{}).length == 0);
    CHECK(lis_static(PointSet{}).chain.empty());
}

TEST_CASE("lis_static matches the DP oracle, witness is always a chain of that length") {
    Rng rng(99);
    for (int iter = 0; iter < 500; ++iter) {
        auto perm = rng.permutation(1 + rng.below(120));
        auto ps = normalize(perm);
        auto r = lis_static(ps);
        CHECK(r.length == oracle::lis_dp(ps));
        CHECK(int64_t(r.chain.size()) == r.length);
        CHECK(is_chain(r.chain));
    }
}

TEST_CASE("incremental LIS tracks prefixes") {
    IncrementalLis acc;
    CHECK(acc.append({0, 0}) == 1);
    CHECK(acc.append({1, 1}) == 2);
    CHECK(acc.append({2, 2}) == 3);

    IncrementalLis dec;
    CHECK(dec.append({0, 2}) == 1);
    CHECK(dec.append({1, 1}) == 1);
    CHECK(dec.append({2, 0}) == 1);

    IncrementalLis bad;
    bad.append({5, 0});
    CHECK_THROWS_AS(bad.append({5, 1}), std::invalid_argument);
    CHECK_THROWS_AS(bad.append({3, 1}), std::invalid_argument);
}

TEST_CASE("incremental LIS equals static LIS on every prefix") {
    Rng rng(1234);
    auto perm = rng.permutation(200);
    auto ps = normalize(perm);
    IncrementalLis acc;
    PointSet prefix;
    for (const Point& p : ps.points) {
        prefix.points.push_back(p);
        CHECK(acc.append(p) == lis_static(prefix).length);
    }
}

TEST_CASE("decreasing partition: structure and count") {
    PointSet sorted;
    for (Coord i = 0; i < 9; ++i) sorted.points.push_back({i, i});
    auto parts = decreasing_partition(sorted);
    CHECK(parts.size() == 9);
    for (auto& part : parts) CHECK(part.size() == 1);

    PointSet rev;
    for (Coord i = 0; i < 9; ++i) rev.points.push_back({i, Coord(8 - i)});
    auto rparts = decreasing_partition(rev);
    CHECK(rparts.size() == 1);
    CHECK(rparts[0].size() == 9);
}

TEST_CASE("decreasing partition: random permutations partition into LIS many parts") {
    Rng rng(5150);
    for (int iter = 0; iter < 30; ++iter) {
        auto perm = rng.permutation(200);
        auto ps = normalize(perm);
        auto parts = decreasing_partition(ps);
        CHECK(int64_t(parts.size()) == oracle::lis_dp(ps));
        size_t total = 0;
        std::vector<uint8_t> used(ps.size(), 0);
        for (auto& part : parts) {
            total += part.size();
            for (size_t i = 0; i < part.size(); ++i) {
                CHECK(!used[size_t(part[i].x)]);
                used[size_t(part[i].x)] = 1;
                if (i > 0) {
                    CHECK(part[i].x > part[i - 1].x);
                    CHECK(part[i].y < part[i - 1].y);  // strictly decreasing
                }
            }
        }
        CHECK(total == ps.size());
    }
}
