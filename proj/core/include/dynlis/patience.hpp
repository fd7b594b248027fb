#pragma once

// Patience sorting over an abstract point type. Pile tops are kept in an
// array ordered by y, so one append is a binary search plus an append;
// predecessor links allow reconstructing one longest chain.
//
// The same code runs in two directions:
//  - PatienceLis appends points with strictly increasing x and tracks the
//    LIS of everything appended so far.
//  - SuffixLis *prepends* points (strictly decreasing x). Prepending is
//    appending to the coordinate-negated, order-reversed sequence, so it
//    reuses PatienceLis with inverted comparisons and reverses the witness.

#include <algorithm>
#include <cstdint>
#include <vector>

namespace dynlis {

template <class P, class YLess>
class PatienceLis {
  public:
    explicit PatienceLis(YLess yless = YLess()) : yless_(yless) {}

    // Returns the LIS length after appending p.
    int64_t append(P p) {
        // First pile whose top is >= p's y (not chainable after p).
        int64_t lo = 0, hi = int64_t(tops_.size());
        while (lo < hi) {
            int64_t mid = (lo + hi) / 2;
            if (yless_(tops_[mid], p))
                lo = mid + 1;
            else
                hi = mid;
        }
        int32_t pred = lo > 0 ? top_entry_[lo - 1] : -1;
        entries_.push_back({p, pred});
        if (lo == int64_t(tops_.size())) {
            tops_.push_back(p);
            top_entry_.push_back(int32_t(entries_.size()) - 1);
        } else {
            tops_[lo] = p;
            top_entry_[lo] = int32_t(entries_.size()) - 1;
        }
        return int64_t(tops_.size());
    }

    int64_t length() const { return int64_t(tops_.size()); }

    // One longest chain, in append order.
    std::vector<P> witness() const {
        std::vector<P> out(tops_.size());
        int32_t e = tops_.empty() ? -1 : top_entry_.back();
        for (size_t i = tops_.size(); i-- > 0;) {
            out[i] = entries_[e].p;
            e = entries_[e].pred;
        }
        return out;
    }

    void clear() {
        tops_.clear();
        top_entry_.clear();
        entries_.clear();
    }

  private:
    struct Entry {
        P p;
        int32_t pred;
    };
    YLess yless_;
    std::vector<P> tops_;
    std::vector<int32_t> top_entry_;
    std::vector<Entry> entries_;
};

// LIS under prepending. push_front() must be called with strictly
// decreasing x. witness() is returned in forward (increasing x) order and
// always starts at the most recently prepended element once that element
// extended the LIS.
template <class P, class YLess>
class SuffixLis {
  public:
    explicit SuffixLis(YLess yless = YLess()) : rev_(Inverted{yless}) {}

    int64_t push_front(P p) { return rev_.append(p); }
    int64_t length() const { return rev_.length(); }

    std::vector<P> witness() const {
        std::vector<P> w = rev_.witness();
        std::reverse(w.begin(), w.end());
        return w;
    }

    void clear() { rev_.clear(); }

  private:
    struct Inverted {
        YLess base;
        bool operator()(const P& a, const P& b) const { return base(b, a); }
    };
    PatienceLis<P, Inverted> rev_;
};

}  // namespace dynlis
