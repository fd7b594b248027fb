#pragma once

// Order maintenance by two-level list labeling: items live in small groups
// renumbered locally on insertion, groups carry 64-bit tags in a top-level
// list redistributed over a doubling window when a gap runs out. Order
// queries compare (group tag, item tag) in O(1); inserts are amortized O(1)
// for our purposes.
//
// Two permanent guards represent -infinity and +infinity. Handles stay
// valid until erased; erasing an element still referenced elsewhere is the
// caller's bug, and the structure throws on any use of an erased handle.

#include <cstdint>
#include <vector>

namespace dynlis {

class OrderMaintenance {
  public:
    using Handle = uint32_t;

    OrderMaintenance();

    Handle head() const { return head_; }  // the -infinity guard
    Handle tail() const { return tail_; }  // the +infinity guard

    // New element immediately after `a`; a must be live and not the tail.
    Handle insert_after(Handle a);
    // a must not be a guard and must no longer be referenced anywhere.
    void erase(Handle a);
    // Whether a strictly precedes b.
    bool precedes(Handle a, Handle b) const;
    bool is_live(Handle a) const { return a < items_.size() && items_[a].live; }

    size_t size() const { return live_count_; }  // excluding guards

  private:
    struct Item {
        uint64_t tag = 0;
        uint32_t group = 0;
        uint32_t prev = kNone, next = kNone;  // within group
        bool live = false;
    };
    struct Group {
        uint64_t tag = 0;
        uint32_t prev = kNone, next = kNone;
        uint32_t first = kNone;
        uint32_t count = 0;
        bool live = false;
    };
    static constexpr uint32_t kNone = 0xffffffffu;
    static constexpr uint32_t kGroupCap = 56;

    uint32_t new_item();
    uint32_t new_group_after(uint32_t g);
    void renumber_group(uint32_t g);
    void split_group(uint32_t g);
    void check_live(Handle a) const;

    std::vector<Item> items_;
    std::vector<Group> groups_;
    std::vector<uint32_t> free_items_, free_groups_;
    uint32_t first_group_ = kNone;
    Handle head_ = 0, tail_ = 0;
    size_t live_count_ = 0;
};

}  // namespace dynlis
