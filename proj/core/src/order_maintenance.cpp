#include "dynlis/order_maintenance.hpp"

#include <stdexcept>

namespace dynlis {

namespace {
constexpr uint64_t kTagSpan = uint64_t(1) << 62;  // top-level label space
constexpr uint64_t kItemStep = uint64_t(1) << 57;
}  // namespace

OrderMaintenance::OrderMaintenance() {
    uint32_t g = new_group_after(kNone);
    head_ = new_item();
    tail_ = new_item();
    Group& gr = groups_[g];
    gr.first = head_;
    gr.count = 2;
    items_[head_] = Item{kItemStep, g, kNone, tail_, true};
    items_[tail_] = Item{2 * kItemStep, g, head_, kNone, true};
}

uint32_t OrderMaintenance::new_item() {
    if (!free_items_.empty()) {
        uint32_t i = free_items_.back();
        free_items_.pop_back();
        items_[i] = Item{};
        return i;
    }
    items_.push_back(Item{});
    return uint32_t(items_.size() - 1);
}

uint32_t OrderMaintenance::new_group_after(uint32_t g) {
    uint32_t id;
    if (!free_groups_.empty()) {
        id = free_groups_.back();
        free_groups_.pop_back();
        groups_[id] = Group{};
    } else {
        groups_.push_back(Group{});
        id = uint32_t(groups_.size() - 1);
    }
    Group& ng = groups_[id];
    ng.live = true;
    if (g == kNone) {
        ng.tag = kTagSpan / 2;
        ng.next = first_group_;
        if (first_group_ != kNone) groups_[first_group_].prev = id;
        first_group_ = id;
        return id;
    }
    ng.prev = g;
    ng.next = groups_[g].next;
    groups_[g].next = id;
    if (ng.next != kNone) groups_[ng.next].prev = id;

    // Tag between the neighbors; when the gap is exhausted, redistribute a
    // doubling window of groups.
    uint64_t lo = groups_[g].tag;
    uint64_t hi = ng.next != kNone ? groups_[ng.next].tag : kTagSpan;
    if (hi - lo < 2) {
        uint32_t left = g;
        uint32_t right = ng.next;
        uint64_t count = 3;
        for (;;) {
            uint64_t lo2 = groups_[left].prev != kNone ? groups_[groups_[left].prev].tag : 0;
            uint64_t hi2 = right != kNone ? groups_[right].tag : kTagSpan;
            if (hi2 - lo2 > 4 * count) break;
            bool moved = false;
            if (groups_[left].prev != kNone) {
                left = groups_[left].prev;
                ++count;
                moved = true;
            }
            if (right != kNone) {
                right = groups_[right].next;
                ++count;
                moved = true;
            }
            if (!moved) throw std::runtime_error("OrderMaintenance: tag space exhausted");
        }
        uint64_t lo2 = groups_[left].prev != kNone ? groups_[groups_[left].prev].tag : 0;
        uint64_t hi2 = right != kNone ? groups_[right].tag : kTagSpan;
        uint64_t step = (hi2 - lo2) / (count + 1);
        uint64_t t = lo2 + step;
        for (uint32_t it = left; it != right; it = groups_[it].next, t += step) groups_[it].tag = t;
        lo = groups_[g].tag;
        hi = ng.next != kNone ? groups_[ng.next].tag : kTagSpan;
    }
    ng.tag = lo + (hi - lo) / 2;
    return id;
}

void OrderMaintenance::renumber_group(uint32_t g) {
    uint64_t t = kItemStep;
    for (uint32_t it = groups_[g].first; it != kNone; it = items_[it].next, t += kItemStep) {
        items_[it].tag = t;
        items_[it].group = g;
    }
}

void OrderMaintenance::split_group(uint32_t g) {
    // Move the second half into a fresh group right after g.
    uint32_t half = groups_[g].count / 2;
    uint32_t it = groups_[g].first;
    for (uint32_t i = 1; i < half; ++i) it = items_[it].next;
    uint32_t ng = new_group_after(g);
    uint32_t firstMoved = items_[it].next;
    items_[it].next = kNone;
    items_[firstMoved].prev = kNone;
    groups_[ng].first = firstMoved;
    groups_[ng].count = groups_[g].count - half;
    groups_[g].count = half;
    renumber_group(g);
    renumber_group(ng);
}

OrderMaintenance::Handle OrderMaintenance::insert_after(Handle a) {
    check_live(a);
    if (a == tail_) throw std::invalid_argument("OrderMaintenance: cannot insert after +inf");
    uint32_t g = items_[a].group;
    uint32_t id = new_item();
    Item& na = items_[a];
    Item& ni = items_[id];
    ni.live = true;
    ni.group = g;
    ni.prev = a;
    ni.next = na.next;
    na.next = id;
    if (ni.next != kNone) items_[ni.next].prev = id;
    ++groups_[g].count;
    renumber_group(g);
    if (groups_[g].count > kGroupCap) split_group(g);
    ++live_count_;
    return id;
}

void OrderMaintenance::erase(Handle a) {
    check_live(a);
    if (a == head_ || a == tail_)
        throw std::invalid_argument("OrderMaintenance: guards cannot be erased");
    Item& it = items_[a];
    uint32_t g = it.group;
    if (it.prev != kNone)
        items_[it.prev].next = it.next;
    else
        groups_[g].first = it.next;
    if (it.next != kNone) items_[it.next].prev = it.prev;
    if (--groups_[g].count == 0) {
        Group& gr = groups_[g];
        if (gr.prev != kNone)
            groups_[gr.prev].next = gr.next;
        else
            first_group_ = gr.next;
        if (gr.next != kNone) groups_[gr.next].prev = gr.prev;
        gr.live = false;
        free_groups_.push_back(g);
    }
    it.live = false;
    free_items_.push_back(a);
    --live_count_;
}

bool OrderMaintenance::precedes(Handle a, Handle b) const {
    check_live(a);
    check_live(b);
    const Item& ia = items_[a];
    const Item& ib = items_[b];
    uint64_t ga = groups_[ia.group].tag;
    uint64_t gb = groups_[ib.group].tag;
    if (ga != gb) return ga < gb;
    return ia.tag < ib.tag;
}

void OrderMaintenance::check_live(Handle a) const {
    if (a >= items_.size() || !items_[a].live)
        throw std::invalid_argument("OrderMaintenance: stale handle");
}

}  // namespace dynlis
