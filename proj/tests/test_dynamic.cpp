#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "dynlis/dynamic.hpp"
#include "dynlis/oracle.hpp"
#include "dynlis/rng.hpp"

using namespace dynlis;

namespace {

int64_t ref_opt(const std::vector<int64_t>& vals, int64_t i, int64_t j) {
    std::vector<int64_t> w(vals.begin() + i, vals.begin() + j + 1);
    return oracle::lis_dp(w);
}

void check_query(const DynamicLis& dyn, const std::vector<int64_t>& ref, int64_t i, int64_t j) {
    int64_t opt = ref_opt(ref, i, j);
    int64_t ans = dyn.query(i, j);
    CHECK(ans <= opt);
    CHECK(double(ans) * (1.0 + dyn.epsilon()) >= double(opt) - 1e-9);
    auto qc = dyn.query_chain(i, j);
    CHECK(qc.score == ans);
    REQUIRE(int64_t(qc.chain.size()) >= qc.score);
    int64_t pp = i - 1;
    int64_t pv = 0;
    for (auto& e : qc.chain) {
        CHECK(e.position > pp);
        CHECK(e.position <= j);
        if (pp >= i) CHECK(e.value > pv);
        CHECK(ref[size_t(e.position)] == e.value);
        pp = e.position;
        pv = e.value;
    }
}

}  // namespace

TEST_CASE("insert into empty then delete") {
    DynamicLis dyn(1.0);
    CHECK(dyn.live() == 0);
    CHECK(dyn.query(0, 0) == 0);
    dyn.insert(0, 42);
    CHECK(dyn.live() == 1);
    CHECK(dyn.query(0, 0) == 1);
    CHECK(dyn.value_at(0) == 42);
    dyn.erase(0);
    CHECK(dyn.live() == 0);
    CHECK(dyn.query(0, 0) == 0);
}

TEST_CASE("appending an ascending run keeps the sandwich bound throughout") {
    DynamicLis dyn(0.5);
    std::vector<int64_t> ref;
    for (int64_t v = 0; v < 192; ++v) {
        dyn.insert(v, v);
        ref.push_back(v);
        int64_t ans = dyn.query(0, v);
        CHECK(ans <= v + 1);
        CHECK(double(ans) * 1.5 >= double(v + 1));
    }
    // now delete from the middle and re-check
    Rng rng(4);
    for (int t = 0; t < 96; ++t) {
        int64_t pos = rng.range(0, dyn.live() - 1);
        dyn.erase(pos);
        ref.erase(ref.begin() + pos);
        check_query(dyn, ref, 0, dyn.live() - 1);
    }
}

TEST_CASE("preload constructor matches fresh inserts") {
    Rng rng(88);
    auto vals = rng.permutation(100);
    DynamicLis a(vals, 1.0);
    DynamicLis b(1.0);
    for (size_t i = 0; i < vals.size(); ++i) b.insert(int64_t(i), vals[i]);
    for (int t = 0; t < 50; ++t) {
        int64_t i = rng.range(0, 99);
        int64_t j = rng.range(i, 99);
        // both are valid approximations of the same array
        int64_t opt = ref_opt(vals, i, j);
        for (int64_t ans : {a.query(i, j), b.query(i, j)}) {
            CHECK(ans <= opt);
            CHECK(double(ans) * 2.0 >= double(opt));
        }
    }
}

TEST_CASE("mixed random workload against the oracle") {
    Rng rng(31415);
    for (double eps : {1.0, 0.5}) {
        DynamicLis dyn(eps);
        std::vector<int64_t> ref;
        for (int step = 0; step < 1200; ++step) {
            uint64_t act = rng.below(100);
            if (ref.empty() || (act < 55 && ref.size() < 400)) {
                int64_t pos = rng.range(0, int64_t(ref.size()));
                int64_t val = rng.range(-1000, 1000);
                dyn.insert(pos, val);
                ref.insert(ref.begin() + pos, val);
            } else if (act < 85) {
                int64_t pos = rng.range(0, int64_t(ref.size()) - 1);
                dyn.erase(pos);
                ref.erase(ref.begin() + pos);
            }
            if (!ref.empty() && step % 4 == 0) {
                int64_t i = rng.range(0, int64_t(ref.size()) - 1);
                int64_t j = rng.range(i, int64_t(ref.size()) - 1);
                check_query(dyn, ref, i, j);
            }
        }
        CHECK(dyn.live() == int64_t(ref.size()));
    }
}

TEST_CASE("duplicate values never chain") {
    DynamicLis dyn(1.0);
    for (int i = 0; i < 40; ++i) dyn.insert(i, 7);
    CHECK(dyn.query(0, 39) == 1);
    // interleave: duplicates inserted in arbitrary positions still behave
    Rng rng(5);
    DynamicLis dyn2(0.5);
    std::vector<int64_t> ref;
    for (int i = 0; i < 200; ++i) {
        int64_t pos = rng.range(0, int64_t(ref.size()));
        int64_t val = rng.range(0, 8);  // heavy ties
        dyn2.insert(pos, val);
        ref.insert(ref.begin() + pos, val);
    }
    check_query(dyn2, ref, 0, int64_t(ref.size()) - 1);
    for (int t = 0; t < 60; ++t) {
        int64_t i = rng.range(0, int64_t(ref.size()) - 1);
        int64_t j = rng.range(i, int64_t(ref.size()) - 1);
        check_query(dyn2, ref, i, j);
    }
}

TEST_CASE("position and range errors") {
    DynamicLis dyn(1.0);
    CHECK_THROWS_AS(dyn.insert(1, 0), std::out_of_range);
    dyn.insert(0, 5);
    CHECK_THROWS_AS(dyn.erase(1), std::out_of_range);
    CHECK_THROWS_AS(dyn.query(1, 1), std::out_of_range);
    CHECK_THROWS_AS(dyn.query(1, 0), std::invalid_argument);
    CHECK_THROWS_AS(DynamicLis(2.0), std::invalid_argument);
}

TEST_CASE("depth audit under a mixed workload") {
    Rng rng(2718);
    DynamicLis dyn(1.0, AuditOptions{true, false});
    std::vector<int64_t> ref;
    for (int step = 0; step < 600; ++step) {
        if (ref.empty() || rng.below(2) == 0) {
            int64_t pos = rng.range(0, int64_t(ref.size()));
            int64_t val = rng.range(0, 100000);
            dyn.insert(pos, val);
            ref.insert(ref.begin() + pos, val);
        } else {
            int64_t pos = rng.range(0, int64_t(ref.size()) - 1);
            dyn.erase(pos);
            ref.erase(ref.begin() + pos);
        }
    }
    const auto& st = dyn.stats();
    CHECK(st.depth_violations == 0);
    CHECK(st.out_size_violations == 0);
}
