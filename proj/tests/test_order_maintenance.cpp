#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <list>
#include <vector>

#include "dynlis/order_maintenance.hpp"
#include "dynlis/rng.hpp"

using namespace dynlis;

TEST_CASE("insert after keeps relative order") {
    OrderMaintenance om;
    auto a = om.insert_after(om.head());
    auto b = om.insert_after(a);
    CHECK(om.precedes(a, b));
    CHECK(!om.precedes(b, a));
    auto c = om.insert_after(a);  // between a and b
    CHECK(om.precedes(a, c));
    CHECK(om.precedes(c, b));
}

TEST_CASE("guards bracket everything") {
    OrderMaintenance om;
    std::vector<OrderMaintenance::Handle> hs;
    auto cur = om.head();
    for (int i = 0; i < 100; ++i) hs.push_back(cur = om.insert_after(cur));
    for (auto h : hs) {
        CHECK(om.precedes(om.head(), h));
        CHECK(om.precedes(h, om.tail()));
    }
}

TEST_CASE("differential test against an indexable list") {
    OrderMaintenance om;
    Rng rng(1618);
    std::vector<OrderMaintenance::Handle> order;  // oracle: current order
    order.push_back(om.head());
    order.push_back(om.tail());
    std::vector<size_t> alive;  // indices into `order` minus guards handled below
    for (int step = 0; step < 100000; ++step) {
        uint64_t act = rng.below(100);
        if (act < 60 || order.size() <= 3) {
            size_t pos = rng.below(order.size() - 1);  // anything but tail
            auto h = om.insert_after(order[pos]);
            order.insert(order.begin() + long(pos) + 1, h);
        } else if (act < 70) {
            size_t pos = 1 + rng.below(order.size() - 2);
            om.erase(order[pos]);
            order.erase(order.begin() + long(pos));
        } else {
            size_t i = rng.below(order.size());
            size_t j = rng.below(order.size());
            if (i == j) continue;
            CHECK(om.precedes(order[i], order[j]) == (i < j));
        }
    }
    CHECK(om.size() == order.size() - 2);
}

TEST_CASE("stale handles and guard misuse are rejected") {
    OrderMaintenance om;
    auto a = om.insert_after(om.head());
    om.erase(a);
    CHECK_THROWS_AS(om.precedes(a, om.tail()), std::invalid_argument);
    CHECK_THROWS_AS(om.insert_after(a), std::invalid_argument);
    CHECK_THROWS_AS(om.erase(om.head()), std::invalid_argument);
    CHECK_THROWS_AS(om.insert_after(om.tail()), std::invalid_argument);
}

TEST_CASE("append-heavy workload stays consistent") {
    OrderMaintenance om;
    auto cur = om.head();
    std::vector<OrderMaintenance::Handle> hs;
    for (int i = 0; i < 50000; ++i) hs.push_back(cur = om.insert_after(cur));
    for (size_t i = 1; i < hs.size(); i += 997) CHECK(om.precedes(hs[i - 1], hs[i]));
    CHECK(om.precedes(hs.front(), hs.back()));
}
